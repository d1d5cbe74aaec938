//! Greedy (2+1) GA and its frequency-fitness variant.
//!
//! The population is a pair `(c, d)` ordered so that `c` is at least as good
//! as `d`. Crossover (`c = 0.5`) happens only between two distinct members
//! of equal quality; otherwise the offspring starts as a copy of `c`. A copy
//! of a parent is mutated with `l ~ Bin>0(s, p)`, a fresh crossover child
//! with `l ~ Bin(s, p)` (possibly no flip at all).
//!
//! Draw order per step: crossover draws, `l`, flip indices, and finally one
//! fair coin if the replaced member has to be chosen at random.

use rand::Rng as _;

use crate::bits::BitString;
use crate::ffa::FrequencyTable;
use crate::ops::{cross, flip_exact, sample_binomial, sample_binomial_gt0};
use crate::rng::Rng;

use super::{CrossoverGate, Evaluator, Halted, Optimizer};

type Step<T> = std::result::Result<T, Halted>;

#[derive(Clone, Debug)]
struct Pair {
    xc: BitString,
    fc: u64,
    xd: BitString,
    fd: u64,
}

impl Pair {
    fn init(eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<Self> {
        let s = eval.scale();
        let xc = BitString::random(rng, s);
        let fc = eval.evaluate(&xc)?;
        let xd = BitString::random(rng, s);
        let fd = eval.evaluate(&xd)?;
        Ok(Self { xc, fc, xd, fd })
    }

    fn order_by(&mut self, key: impl Fn(u64) -> u64) {
        if key(self.fc) > key(self.fd) {
            std::mem::swap(&mut self.xc, &mut self.xd);
            std::mem::swap(&mut self.fc, &mut self.fd);
        }
    }

    fn breed(&self, crossover: bool, p: f64, rng: &mut Rng) -> BitString {
        let s = self.xc.len();
        let (xe, is_parent) = if crossover && self.xc != self.xd {
            let r = cross(rng, &self.xc, &self.xd, 0.5);
            let is_parent = r.same_as_first || r.same_as_second;
            (r.child, is_parent)
        } else {
            (self.xc.clone(), true)
        };
        let ell = if is_parent {
            sample_binomial_gt0(rng, s, p)
        } else {
            sample_binomial(rng, s, p)
        };
        if ell == 0 {
            xe
        } else {
            flip_exact(rng, &xe, ell)
        }
    }

    /// Assumes `key(fn_) <= key(fd)` and the pair ordered by `key`.
    fn replace(&mut self, xn: BitString, fn_: u64, key: impl Fn(u64) -> u64, rng: &mut Rng) {
        if key(self.fd) > key(self.fc) || rng.random_bool(0.5) {
            self.xd = xn;
            self.fd = fn_;
        } else {
            self.xc = xn;
            self.fc = fn_;
        }
        self.order_by(key);
    }
}

#[derive(Clone, Debug)]
pub struct GgaState {
    pair: Pair,
    p: f64,
}

impl GgaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng, p: f64) -> Step<Self> {
        let mut pair = Pair::init(eval, rng)?;
        pair.order_by(|f| f);
        Ok(Self { pair, p })
    }

    /// `(x_c, f(x_c), x_d, f(x_d))` with `f(x_c) <= f(x_d)`.
    pub fn population(&self) -> (&BitString, u64, &BitString, u64) {
        let p = &self.pair;
        (&p.xc, p.fc, &p.xd, p.fd)
    }

    pub fn mutation_rate(&self) -> f64 {
        self.p
    }
}

impl Optimizer for GgaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        let pair = &mut self.pair;
        let xn = pair.breed(pair.fc == pair.fd, self.p, rng);
        let fn_ = eval.evaluate(&xn)?;
        if fn_ <= pair.fd {
            pair.replace(xn, fn_, |f| f, rng);
        }
        Ok(eval.used_fes() - before)
    }
}

/// GGA with every objective comparison replaced by a frequency comparison.
/// The three members entering selection (`c`, `d` and the offspring) each
/// bump their counter once before it.
#[derive(Clone, Debug)]
pub struct GfgaState {
    pair: Pair,
    p: f64,
    gate: CrossoverGate,
    table: FrequencyTable,
}

impl GfgaState {
    pub fn new(eval: &mut Evaluator<'_>, rng: &mut Rng, p: f64, gate: CrossoverGate) -> Step<Self> {
        let table = FrequencyTable::new(eval.upper_bound());
        let pair = Pair::init(eval, rng)?;
        Ok(Self {
            pair,
            p,
            gate,
            table,
        })
    }

    pub fn population(&self) -> (&BitString, u64, &BitString, u64) {
        let p = &self.pair;
        (&p.xc, p.fc, &p.xd, p.fd)
    }

    pub fn table(&self) -> &FrequencyTable {
        &self.table
    }
}

impl Optimizer for GfgaState {
    fn step(&mut self, eval: &mut Evaluator<'_>, rng: &mut Rng) -> Step<u64> {
        let before = eval.used_fes();
        let table = &mut self.table;
        let pair = &mut self.pair;
        pair.order_by(|f| table.get(f));
        let gate = match self.gate {
            CrossoverGate::Fitness => table.get(pair.fc) == table.get(pair.fd),
            CrossoverGate::Objective => pair.fc == pair.fd,
        };
        let xn = pair.breed(gate, self.p, rng);
        let fn_ = eval.evaluate(&xn)?;
        table.bump(pair.fc);
        table.bump(pair.fd);
        table.bump(fn_);
        pair.order_by(|f| table.get(f));
        if table.get(fn_) <= table.get(pair.fd) {
            let table = &*table;
            pair.replace(xn, fn_, |f| table.get(f), rng);
        }
        Ok(eval.used_fes() - before)
    }
}
