//! Problem-level properties: value ranges, optima, and the injective
//! relations between OneMax, Trap and Jump that the trace tests rely on.

use ffa_core::problems::{make_problem, ProblemParams, PROBLEM_NAMES};
use ffa_core::{BitString, Rng};
use proptest::prelude::*;

fn width(w: u64) -> ProblemParams {
    ProblemParams {
        width: Some(w),
        ..ProblemParams::default()
    }
}

fn params_for(name: &str) -> ProblemParams {
    match name {
        "jump" | "plateau" => width(3),
        _ => ProblemParams::default(),
    }
}

#[test]
fn every_registered_problem_builds_and_has_optimum_zero() {
    for name in PROBLEM_NAMES {
        let s = 16;
        let p = make_problem(name, s, params_for(name)).unwrap();
        assert_eq!(p.name(), name);
        assert_eq!(p.scale(), s);
        let optimum = match name {
            "trap" => BitString::zeros(s),
            "nqueens" => "0100000110000010".parse().unwrap(),
            _ => BitString::ones(s),
        };
        assert_eq!(p.evaluate(&optimum), 0, "{name}");
    }
}

#[test]
fn factory_examples() {
    assert_eq!(
        make_problem("jump", 32, width(6)).unwrap().upper_bound(),
        37
    );
    assert_eq!(
        make_problem("onemax", 100, ProblemParams::default())
            .unwrap()
            .upper_bound(),
        100
    );
    assert!(make_problem("nqueens", 17, ProblemParams::default()).is_err());
    assert!(make_problem("jump", 32, width(1)).is_err());
    assert!(make_problem("jump", 32, width(32)).is_err());
    assert!(make_problem("ising1d", 2, ProblemParams::default()).is_err());
    assert!(make_problem("ising2d", 1, ProblemParams::default()).is_err());
    assert!(make_problem("linharm", 0, ProblemParams::default()).is_err());
    let n = ProblemParams {
        queens: Some(5),
        ..ProblemParams::default()
    };
    assert!(make_problem("nqueens", 16, n).is_err());
    assert!(make_problem("onemax", 16, n).is_err());
}

fn problem_case() -> impl Strategy<Value = (&'static str, usize, u64)> {
    (0..PROBLEM_NAMES.len(), 2usize..12, any::<u64>()).prop_map(|(i, k, seed)| {
        let name = PROBLEM_NAMES[i];
        let s = match name {
            "nqueens" => (k.max(4)).pow(2),
            "ising2d" => k.pow(2),
            _ => k * 13 + 3,
        };
        (name, s, seed)
    })
}

proptest! {
    #[test]
    fn values_stay_within_upper_bound((name, s, seed) in problem_case()) {
        let p = make_problem(name, s, params_for(name)).unwrap();
        let mut rng = Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let x = BitString::random(&mut rng, s);
            prop_assert!(p.evaluate(&x) <= p.upper_bound());
        }
    }

    #[test]
    fn trap_and_jump_are_injective_in_onemax(s in 5usize..300, seed: u64, wf in 0.0f64..1.0) {
        let w = 2 + ((s - 3) as f64 * wf) as u64;
        let om = make_problem("onemax", s, ProblemParams::default()).unwrap();
        let tr = make_problem("trap", s, ProblemParams::default()).unwrap();
        let jm = make_problem("jump", s, width(w)).unwrap();
        let mut rng = Rng::seed_from_u64(seed);
        let x = BitString::random(&mut rng, s);
        let y = BitString::random(&mut rng, s);
        let same = |a: u64, b: u64| a == b;
        let (ox, oy) = (om.evaluate(&x), om.evaluate(&y));
        prop_assert_eq!(same(ox, oy), same(tr.evaluate(&x), tr.evaluate(&y)));
        prop_assert_eq!(same(ox, oy), same(jm.evaluate(&x), jm.evaluate(&y)));
    }
}
