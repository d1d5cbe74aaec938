"""Generate satisfiable uniform random 3-SAT instances (20 variables, 91
clauses) in SATLib's uf20-91 layout, filtered by exhaustive search.

    python3 scripts/gen_uf20.py crates/core/tests/data/uf20 20 2024
"""
import random
import sys
from pathlib import Path

import numpy as np

N_VARS, N_CLAUSES = 20, 91


def satisfiable(clauses):
    codes = np.arange(1 << N_VARS, dtype=np.uint32)
    alive = np.ones(codes.shape, dtype=bool)
    for clause in clauses:
        sat = np.zeros(codes.shape, dtype=bool)
        for lit in clause:
            bit = (codes >> (abs(lit) - 1)) & 1
            sat |= bit == (1 if lit > 0 else 0)
        alive &= sat
        if not alive.any():
            return False
    return True


def main(out, count, seed):
    rng = random.Random(seed)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    made = tried = 0
    while made < count:
        tried += 1
        clauses = [
            [v if rng.random() < 0.5 else -v for v in rng.sample(range(1, N_VARS + 1), 3)]
            for _ in range(N_CLAUSES)
        ]
        if not satisfiable(clauses):
            continue
        made += 1
        lines = [
            f"c uniform random 3-SAT, {N_VARS} variables, {N_CLAUSES} clauses",
            f"c generator seed {seed}, draw {tried}, satisfiable by exhaustive search",
            f"p cnf {N_VARS} {N_CLAUSES}",
        ]
        lines += [" " + " ".join(map(str, c)) + " 0" for c in clauses]
        lines += ["%", "0", ""]
        (out / f"uf20-0{made}.cnf").write_text("\n".join(lines))
    print(f"{made} satisfiable of {tried} drawn")


if __name__ == "__main__":
    main(sys.argv[1], int(sys.argv[2]), int(sys.argv[3]))
