//! Self-adjusting (1+(λ,λ)) GA, its frequency-fitness variant, and the
//! hybrid that switches between the two.
//!
//! One iteration with `λ' = round(λ)`, `p = λ/s`, `c = 1/λ`:
//!
//! 1. `l ~ Bin>0(s, p)`; `λ'` mutants each flip `l` fresh random bits; the
//!    best one (first found on ties) is `x'`.
//! 2. `λ'` crossover children of `(x, x')`; children equal to `x` or `x'`
//!    are not evaluated.
//! 3. `x_n` is the best of `x'` and the evaluated children (`x'` wins ties,
//!    then the first found).
//! 4. `λ ← max(1, λ/F)` if `x_n` is strictly better than `x`, otherwise
//!    `λ ← min(s, λ F^(1/4))`, with `F = 1.5`.
//! 5. `x ← x_n` if `x_n` is at least as good.
//!
//! Under frequency fitness "better" means a smaller counter. The counters of
//! `x`, `x'` and every evaluated child are bumped once right before step 3;
//! mutants are compared on the counters as they stand.
//!
//! Draw order per step: `l`, then each mutant's flip indices, then each
//! child's crossover draws.

use crate::bits::BitString;
use crate::ffa::FrequencyTable;
use crate::ops::{cross, flip_exact, sample_binomial_gt0};
use crate::rng::Rng;

use super::{Evaluator, Halted, Optimizer};

type Step<T> = std::result::Result<T, Halted>;

pub const ADAPTATION_FACTOR: f64 = 1.5;

#[derive(Clone, Debug)]
struct LambdaLambda {
    x: BitString,
    f: u64,
    lambda: f64,
}

impl LambdaLambda {
    fn init(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let x = BitString::random(rng, eval.scale());
        let f = eval.evaluate(&x)?;
        Ok(Self { x, f, lambda: 1.0 })
    }

    fn offspring_count(&self) -> usize {
        (self.lambda.round() as usize).clamp(1, self.x.len())
    }

    /// One iteration; `table` switches selection to frequency fitness.
    /// Returns whether the iteration counted as a success.
    fn iterate(
        &mut self,
        mut table: Option<&mut FrequencyTable>,
        single_mutant_at_full: bool,
        eval: &mut Evaluator<'_>,
        rng: &mut Rng,
    ) -> Step<bool> {
        let s = self.x.len();
        let count = self.offspring_count();
        let p = (self.lambda / s as f64).min(1.0);
        let c = 1.0 / self.lambda;
        let mutants = if single_mutant_at_full && count == s {
            1
        } else {
            count
        };

        let ell = sample_binomial_gt0(rng, s, p);
        let mut best: Option<(BitString, u64)> = None;
        for _ in 0..mutants {
            let m = flip_exact(rng, &self.x, ell);
            let fm = eval.evaluate(&m)?;
            let better = match &best {
                None => true,
                Some((_, fb)) => key(table.as_deref(), fm) < key(table.as_deref(), *fb),
            };
            if better {
                best = Some((m, fm));
            }
        }
        let (xp, fp) = best.expect("at least one mutant");

        let mut children: Vec<(BitString, u64)> = Vec::new();
        for _ in 0..count {
            let r = cross(rng, &self.x, &xp, c);
            if r.same_as_first || r.same_as_second {
                continue;
            }
            let fy = eval.evaluate(&r.child)?;
            children.push((r.child, fy));
        }

        if let Some(t) = table.as_deref_mut() {
            t.bump(self.f);
            t.bump(fp);
            for (_, fy) in &children {
                t.bump(*fy);
            }
        }
        let table = table.as_deref();
        let (mut xn, mut fn_) = (xp, fp);
        for (y, fy) in children {
            if key(table, fy) < key(table, fn_) {
                xn = y;
                fn_ = fy;
            }
        }

        let (kn, kc) = (key(table, fn_), key(table, self.f));
        let success = kn < kc;
        self.lambda = if success {
            (self.lambda / ADAPTATION_FACTOR).max(1.0)
        } else {
            (self.lambda * ADAPTATION_FACTOR.powf(0.25)).min(s as f64)
        };
        if kn <= kc {
            self.x = xn;
            self.f = fn_;
        }
        Ok(success)
    }
}

#[inline]
fn key(table: Option<&FrequencyTable>, f: u64) -> u64 {
    match table {
        Some(t) => t.get(f),
        None => f,
    }
}

#[derive(Clone, Debug)]
pub struct SagaState {
    core: LambdaLambda,
}

impl SagaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        Ok(Self {
            core: LambdaLambda::init(eval, rng)?,
        })
    }

    pub fn current(&self) -> (&BitString, u64) {
        (&self.core.x, self.core.f)
    }

    pub fn lambda(&self) -> f64 {
        self.core.lambda
    }
}

impl Optimizer for SagaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        self.core.iterate(None, false, eval, rng)?;
        Ok(eval.used_fes() - before)
    }
}

#[derive(Clone, Debug)]
pub struct SafgaState {
    core: LambdaLambda,
    table: FrequencyTable,
}

impl SafgaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let table = FrequencyTable::new(eval.upper_bound());
        Ok(Self {
            core: LambdaLambda::init(eval, rng)?,
            table,
        })
    }

    pub fn current(&self) -> (&BitString, u64) {
        (&self.core.x, self.core.f)
    }

    pub fn lambda(&self) -> f64 {
        self.core.lambda
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }
}

impl Optimizer for SafgaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        self.core.iterate(Some(&mut self.table), false, eval, rng)?;
        Ok(eval.used_fes() - before)
    }
}

/// Selection regime of the SAFGAP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Pure,
    Ffa,
}

/// Runs as the plain SAGA until the end of the first iteration that starts
/// with `λ' = s`; from then on it selects on
/// frequency fitness until the best-so-far value improves, then switches
/// back. With `λ' = s` only one mutant is created, since all would be the
/// complement of `x`. The counters are only updated in FFA mode and are
/// kept across switches, as is `λ`.
#[derive(Clone, Debug)]
pub struct SafgapState {
    core: LambdaLambda,
    table: FrequencyTable,
    mode: Mode,
}

impl SafgapState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let table = FrequencyTable::new(eval.upper_bound());
        Ok(Self {
            core: LambdaLambda::init(eval, rng)?,
            table,
            mode: Mode::Pure,
        })
    }

    pub fn current(&self) -> (&BitString, u64) {
        (&self.core.x, self.core.f)
    }

    pub fn lambda(&self) -> f64 {
        self.core.lambda
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }
}

impl Optimizer for SafgapState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        let best_before = eval.best_f();
        let started_full = self.core.offspring_count() == self.core.x.len();
        let table = match self.mode {
            Mode::Pure => None,
            Mode::Ffa => Some(&mut self.table),
        };
        self.core.iterate(table, true, eval, rng)?;
        let improved = eval.best_f() < best_before;
        self.mode = match self.mode {
            Mode::Pure if started_full => Mode::Ffa,
            Mode::Ffa if improved => Mode::Pure,
            unchanged => unchanged,
        };
        Ok(eval.used_fes() - before)
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::{Constant, Func};
    use super::*;
    use crate::problems::{OneMax, Plateau};

    fn grow_steps(s: usize) -> usize {
        // Smallest k with 1.5^(k/4) >= s.
        (4.0 * (s as f64).ln() / ADAPTATION_FACTOR.ln()).ceil() as usize
    }

    #[test]
    fn lambda_one_costs_one_fe() {
        let p = OneMax::new(50);
        let mut rng = Rng::seed_from_u64(1);
        let mut eval = Evaluator::new(&p, 10_000);
        let mut g = SagaState::new(&mut eval, &mut rng).unwrap();
        assert_eq!(g.lambda(), 1.0);
        // On a random start the first mutant improves with good probability;
        // while λ stays at 1 every step is one FE.
        for _ in 0..20 {
            if g.lambda() != 1.0 {
                break;
            }
            assert_eq!(g.step(&mut eval, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn lambda_stays_in_bounds() {
        for (s, seed) in [(8usize, 1u64), (16, 2), (33, 3)] {
            let p = OneMax::new(s);
            let mut rng = Rng::seed_from_u64(seed);
            let mut eval = Evaluator::new(&p, 50_000).without_optimum_stop();
            let mut g = SafgaState::new(&mut eval, &mut rng).unwrap();
            while g.step(&mut eval, &mut rng).is_ok() {
                assert!((1.0..=s as f64).contains(&g.lambda()));
            }
        }
    }

    #[test]
    fn constant_objective_grows_lambda_to_scale() {
        let s = 16;
        let p = Constant(s, 3);
        let k = grow_steps(s);
        assert_eq!(k, 28);
        let mut rng = Rng::seed_from_u64(2);
        let mut eval = Evaluator::new(&p, 1_000_000);
        let mut g = SafgaState::new(&mut eval, &mut rng).unwrap();
        for i in 1..=k {
            g.step(&mut eval, &mut rng).unwrap();
            assert_eq!(g.lambda() == s as f64, i == k);
        }
        let mut pure = SagaState::new(&mut eval, &mut rng).unwrap();
        for _ in 0..k {
            pure.step(&mut eval, &mut rng).unwrap();
        }
        assert_eq!(pure.lambda(), s as f64);
    }

    #[test]
    fn safga_counters_grow_by_participants() {
        let p = Constant(12, 2);
        let mut rng = Rng::seed_from_u64(3);
        let mut eval = Evaluator::new(&p, 1_000_000);
        let mut g = SafgaState::new(&mut eval, &mut rng).unwrap();
        for _ in 0..40 {
            let h0 = g.table.get(2);
            let fe0 = eval.used_fes();
            let count = g.core.offspring_count() as u64;
            g.step(&mut eval, &mut rng).unwrap();
            let evaluated_children = eval.used_fes() - fe0 - count;
            assert_eq!(g.table.get(2) - h0, 2 + evaluated_children);
        }
    }

    #[test]
    fn safga_fresh_values_after_a_retained_parent_are_successes() {
        // Values are the string's integer code, so every new string is fresh.
        let p = Func(20, (1 << 20) - 1, |x: &BitString| x.words()[0]);
        let mut rng = Rng::seed_from_u64(4);
        let mut eval = Evaluator::new(&p, 1_000_000).without_optimum_stop();
        let mut g = SafgaState::new(&mut eval, &mut rng).unwrap();
        // First iteration: parent and offspring both end at count 1, which is
        // not a strict improvement.
        g.step(&mut eval, &mut rng).unwrap();
        assert!(g.lambda() > 1.0);
        // Now the retained parent's value reaches count 2 after its bump
        // while a fresh offspring sits at 1: success, λ shrinks back to 1.
        g.step(&mut eval, &mut rng).unwrap();
        assert_eq!(g.lambda(), 1.0);
    }

    #[test]
    fn safgap_switches_one_iteration_after_lambda_reaches_scale() {
        let s = 16;
        let p = Constant(s, 5);
        let k = grow_steps(s);
        let mut rng = Rng::seed_from_u64(5);
        let mut eval = Evaluator::new(&p, 1_000_000);
        let mut g = SafgapState::new(&mut eval, &mut rng).unwrap();
        for _ in 0..k {
            g.step(&mut eval, &mut rng).unwrap();
            assert_eq!(g.mode(), Mode::Pure);
        }
        assert_eq!(g.core.offspring_count(), s);
        let fe0 = eval.used_fes();
        g.step(&mut eval, &mut rng).unwrap();
        assert_eq!(g.mode(), Mode::Ffa);
        // A single complement mutant plus at most s children.
        assert!(eval.used_fes() - fe0 <= 1 + s as u64);
        assert_eq!(g.table.total_increments(), 0);
        g.step(&mut eval, &mut rng).unwrap();
        assert!(g.table.total_increments() >= 2);
    }

    #[test]
    fn safgap_mode_transitions_on_plateau() {
        let s = 16;
        let p = Plateau::new(s, 5).unwrap();
        let mut switches = 0;
        for seed in 0..20 {
            let mut rng = Rng::seed_from_u64(seed);
            let mut eval = Evaluator::new(&p, 1_000_000);
            let mut g = SafgapState::new(&mut eval, &mut rng).unwrap();
            loop {
                let mode = g.mode();
                let started_full = g.core.offspring_count() == s;
                let best = eval.best_f();
                if g.step(&mut eval, &mut rng).is_err() {
                    break;
                }
                let improved = eval.best_f() < best;
                match (mode, g.mode()) {
                    (Mode::Pure, Mode::Ffa) => {
                        assert!(started_full);
                        switches += 1;
                    }
                    (Mode::Pure, Mode::Pure) => assert!(!started_full),
                    (Mode::Ffa, Mode::Pure) => assert!(improved),
                    (Mode::Ffa, Mode::Ffa) => assert!(!improved),
                }
            }
            assert_eq!(eval.best_f(), 0);
        }
        assert!(switches > 0, "the plateau should force at least one switch");
    }
}
