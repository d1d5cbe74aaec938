//! The eight optimizers: three pure algorithms, their frequency-fitness
//! counterparts, and two hybrids.
//!
//! Every algorithm is a state type with a constructor that samples and
//! evaluates the initial solution(s) and an [`Optimizer::step`] that runs one
//! iteration. All objective evaluations go through an [`Evaluator`], which
//! counts FEs, keeps the best-so-far solution, and refuses further
//! evaluations once the budget is spent or the optimum has been found. A
//! refused evaluation surfaces as [`Halted`] and aborts the current step, so
//! budgets are enforced at single-evaluation granularity.
//!
//! Random numbers are drawn in a fixed order inside each step (documented per
//! algorithm), which makes paired-seed trace comparisons meaningful.

mod ea;
mod gga;
mod saga;

use std::fmt;
use std::str::FromStr;

pub use ea::{EaState, EafeaState, FeaState};
pub use gga::{GfgaState, GgaState};
pub use saga::{Mode, SafgaState, SafgapState, SagaState};

use crate::bits::BitString;
use crate::error::{invalid, Error, Result};
use crate::harness::RunRecord;
use crate::problems::Problem;
use crate::rng::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AlgorithmId {
    Ea,
    Fea,
    Gga,
    Gfga,
    Saga,
    Safga,
    Eafea,
    Safgap,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 8] = [
        Self::Ea,
        Self::Fea,
        Self::Gga,
        Self::Gfga,
        Self::Saga,
        Self::Safga,
        Self::Eafea,
        Self::Safgap,
    ];

    pub const NAMES: [&'static str; 8] = [
        "ea", "fea", "gga", "gfga", "saga", "safga", "eafea", "safgap",
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    /// Whether the algorithm uses frequency fitness at all (FFA-only or hybrid).
    pub fn uses_ffa(self) -> bool {
        !matches!(self, Self::Ea | Self::Gga | Self::Saga)
    }

    /// The pure algorithm an FFA-based one is derived from.
    pub fn pure_counterpart(self) -> Self {
        match self {
            Self::Fea | Self::Eafea => Self::Ea,
            Self::Gfga => Self::Gga,
            Self::Safga | Self::Safgap => Self::Saga,
            pure => pure,
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match Self::NAMES.iter().position(|&n| n == s) {
            Some(i) => Ok(Self::ALL[i]),
            None => invalid(format!(
                "unknown algorithm {s:?}, expected one of {}",
                Self::NAMES.join(", ")
            )),
        }
    }
}

/// Which comparison opens the crossover branch of the GFGA.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CrossoverGate {
    /// `H[f(x_c)] = H[f(x_d)]`
    #[default]
    Fitness,
    /// `f(x_c) = f(x_d)`
    Objective,
}

/// When the FEA half of the EAFEA overwrites the EA's current solution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Overwrite {
    /// `f(x_n^FEA) <= f(x_c^EA)`
    #[default]
    AtLeastAsGood,
    /// `f(x_n^FEA) = f(x_c^EA)`
    Equal,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgorithmConfig {
    /// GGA/GFGA mutation rate numerator: `p = factor / s`. Defaults to the
    /// golden ratio `(1 + sqrt 5) / 2`.
    pub gga_rate_factor: Option<f64>,
    pub gfga_gate: CrossoverGate,
    pub eafea_overwrite: Overwrite,
}

pub const GOLDEN_RATE_FACTOR: f64 = 1.618_033_988_749_895;

impl AlgorithmConfig {
    pub(crate) fn gga_rate(&self, s: usize) -> f64 {
        (self.gga_rate_factor.unwrap_or(GOLDEN_RATE_FACTOR) / s as f64).min(1.0)
    }
}

/// Returned when the evaluator refuses to evaluate: budget spent or optimum
/// already found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Halted;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestSoFar {
    pub x: BitString,
    pub f: u64,
    /// 1-based index of the evaluation that first produced `f`.
    pub at_fe: u64,
}

pub struct Evaluator<'a> {
    problem: &'a dyn Problem,
    budget: u64,
    used: u64,
    best: Option<BestSoFar>,
    stop_at_optimum: bool,
    trace: Option<Vec<BitString>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(problem: &'a dyn Problem, budget: u64) -> Self {
        Self {
            problem,
            budget,
            used: 0,
            best: None,
            stop_at_optimum: true,
            trace: None,
        }
    }

    /// Record every evaluated string.
    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    /// Keep evaluating after the optimum was found (until the budget ends).
    pub fn without_optimum_stop(mut self) -> Self {
        self.stop_at_optimum = false;
        self
    }

    pub fn problem(&self) -> &'a dyn Problem {
        self.problem
    }

    pub fn scale(&self) -> usize {
        self.problem.scale()
    }

    pub fn upper_bound(&self) -> u64 {
        self.problem.upper_bound()
    }

    pub fn used_fes(&self) -> u64 {
        self.used
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn best(&self) -> Option<&BestSoFar> {
        self.best.as_ref()
    }

    pub(crate) fn best_f(&self) -> u64 {
        self.best.as_ref().map_or(u64::MAX, |b| b.f)
    }

    pub fn is_done(&self) -> bool {
        self.used >= self.budget || (self.stop_at_optimum && self.best_f() == 0)
    }

    pub fn trace(&self) -> Option<&[BitString]> {
        self.trace.as_deref()
    }

    pub fn into_trace(self) -> Option<Vec<BitString>> {
        self.trace
    }

    pub fn evaluate(&mut self, x: &BitString) -> std::result::Result<u64, Halted> {
        if self.is_done() {
            return Err(Halted);
        }
        let f = self.problem.evaluate(x);
        self.used += 1;
        if let Some(trace) = &mut self.trace {
            trace.push(x.clone());
        }
        if f < self.best_f() {
            self.best = Some(BestSoFar {
                x: x.clone(),
                f,
                at_fe: self.used,
            });
        }
        Ok(f)
    }
}

pub trait Optimizer {
    /// One iteration. Returns the FEs it consumed.
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng)
        -> std::result::Result<u64, Halted>;
}

/// Samples the initial state of `id` (charging its initial evaluations).
pub fn start(
    id: AlgorithmId,
    config: &AlgorithmConfig,
    eval: &mut Evaluator<'_>,
    rng: &mut Rng,
) -> std::result::Result<Box<dyn Optimizer>, Halted> {
    Ok(match id {
        AlgorithmId::Ea => Box::new(EaState::new(eval, rng)?),
        AlgorithmId::Fea => Box::new(FeaState::new(eval, rng)?),
        AlgorithmId::Gga => Box::new(GgaState::new(eval, rng, config.gga_rate(eval.scale()))?),
        AlgorithmId::Gfga => Box::new(GfgaState::new(
            eval,
            rng,
            config.gga_rate(eval.scale()),
            config.gfga_gate,
        )?),
        AlgorithmId::Saga => Box::new(SagaState::new(eval, rng)?),
        AlgorithmId::Safga => Box::new(SafgaState::new(eval, rng)?),
        AlgorithmId::Eafea => Box::new(EafeaState::new(eval, rng, config.eafea_overwrite)?),
        AlgorithmId::Safgap => Box::new(SafgapState::new(eval, rng)?),
    })
}

/// Steps `id` until the evaluator halts.
pub fn drive(id: AlgorithmId, config: &AlgorithmConfig, eval: &mut Evaluator<'_>, rng: &mut Rng) {
    if let Ok(mut opt) = start(id, config, eval, rng) {
        while opt.step(eval, rng).is_ok() {}
    }
}

/// One full run from `seed`: stops at the first optimal evaluation or when
/// `budget` FEs are spent.
pub fn run(
    id: AlgorithmId,
    problem: &dyn Problem,
    seed: u64,
    budget: u64,
    config: &AlgorithmConfig,
) -> Result<RunRecord> {
    if budget == 0 {
        return invalid("budget must be at least one FE");
    }
    let mut rng = Rng::seed_from_u64(seed);
    let mut eval = Evaluator::new(problem, budget);
    drive(id, config, &mut eval, &mut rng);
    let best = eval.best().expect("at least one evaluation was performed");
    Ok(RunRecord {
        algorithm: id.name().to_string(),
        problem: problem.name().to_string(),
        instance: problem.instance(),
        scale: problem.scale(),
        seed,
        budget_fes: budget,
        used_fes: eval.used_fes(),
        best_f: best.f,
        success: best.f == 0,
    })
}

/// The evaluated strings of the first `fes` evaluations from `seed`,
/// without stopping at the optimum.
pub fn trace(
    id: AlgorithmId,
    problem: &dyn Problem,
    seed: u64,
    fes: u64,
    config: &AlgorithmConfig,
) -> Vec<BitString> {
    let mut rng = Rng::seed_from_u64(seed);
    let mut eval = Evaluator::new(problem, fes)
        .with_trace()
        .without_optimum_stop();
    drive(id, config, &mut eval, &mut rng);
    eval.into_trace().unwrap_or_default()
}
