//! (1+1) EA, (1+1) FEA and their alternating hybrid.
//!
//! Draw order per step: `l ~ Bin>0(s, 1/s)`, then the `l` flip indices.

use crate::bits::BitString;
use crate::ffa::FrequencyTable;
use crate::ops::{flip_exact, sample_binomial_gt0};
use crate::rng::Rng;

use super::{Evaluator, Halted, Optimizer, Overwrite};

type Step<T> = std::result::Result<T, Halted>;

fn offspring(x: &BitString, rng: &mut Rng) -> BitString {
    let s = x.len();
    let ell = sample_binomial_gt0(rng, s, 1.0 / s as f64);
    flip_exact(rng, x, ell)
}

fn initial(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<(BitString, u64)> {
    let x = BitString::random(rng, eval.scale());
    let f = eval.evaluate(&x)?;
    Ok((x, f))
}

/// Elitist (1+1) EA with at least one flipped bit per offspring.
#[derive(Clone, Debug)]
pub struct EaState {
    x: BitString,
    f: u64,
}

impl EaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let (x, f) = initial(eval, rng)?;
        Ok(Self { x, f })
    }

    pub fn current(&self) -> (&BitString, u64) {
        (&self.x, self.f)
    }

    fn iterate(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<()> {
        let xn = offspring(&self.x, rng);
        let fn_ = eval.evaluate(&xn)?;
        if fn_ <= self.f {
            self.x = xn;
            self.f = fn_;
        }
        Ok(())
    }
}

impl Optimizer for EaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        self.iterate(eval, rng)?;
        Ok(eval.used_fes() - before)
    }
}

/// (1+1) EA selecting on frequency fitness: both the current solution and
/// the offspring bump their value's counter, and the offspring replaces the
/// current solution unless its value is strictly more frequent.
#[derive(Clone, Debug)]
pub struct FeaState {
    x: BitString,
    f: u64,
    table: FrequencyTable,
}

impl FeaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let table = FrequencyTable::new(eval.upper_bound());
        let (x, f) = initial(eval, rng)?;
        Ok(Self { x, f, table })
    }

    pub fn current(&self) -> (&BitString, u64) {
        (&self.x, self.f)
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }

    /// Returns the offspring and its objective value.
    fn iterate(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<(BitString, u64)> {
        let xn = offspring(&self.x, rng);
        let fn_ = eval.evaluate(&xn)?;
        self.table.bump(self.f);
        self.table.bump(fn_);
        if self.table.get(fn_) <= self.table.get(self.f) {
            self.x = xn.clone();
            self.f = fn_;
        }
        Ok((xn, fn_))
    }
}

impl Optimizer for FeaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        self.iterate(eval, rng)?;
        Ok(eval.used_fes() - before)
    }
}

/// One EA step then one FEA step. An FEA offspring at least as good as the
/// EA's current solution replaces it.
#[derive(Clone, Debug)]
pub struct EafeaState {
    ea: EaState,
    fea: FeaState,
    overwrite: Overwrite,
}

impl EafeaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng, overwrite: Overwrite) -> Step<Self> {
        let ea = EaState::new(eval, rng)?;
        let fea = FeaState::new(eval, rng)?;
        Ok(Self { ea, fea, overwrite })
    }

    pub fn ea(&self) -> &EaState {
        &self.ea
    }

    pub fn fea(&self) -> &FeaState {
        &self.fea
    }
}

impl Optimizer for EafeaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        self.ea.iterate(eval, rng)?;
        let (xn, fn_) = self.fea.iterate(eval, rng)?;
        let inform = match self.overwrite {
            Overwrite::AtLeastAsGood => fn_ <= self.ea.f,
            Overwrite::Equal => fn_ == self.ea.f,
        };
        if inform {
            self.ea.x = xn;
            self.ea.f = fn_;
        }
        Ok(eval.used_fes() - before)
    }
}
