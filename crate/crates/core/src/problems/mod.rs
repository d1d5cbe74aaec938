//! Benchmark objective functions behind one minimization interface.
//!
//! Every problem maps bit strings to integers in `[0, UB]` and has optimum 0.
//! [`Problem`] is also the extension point for problems this crate does not
//! ship (MAX-SAT lives in [`crate::sat`]).

mod ising;
mod nqueens;
mod pseudo_boolean;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use ising::{edges_1d, edges_2d, ising, EdgeSet, Ising};
pub use nqueens::{nqueens, NQueens};
pub use pseudo_boolean::{
    jump, leadingones, linear_harmonic, onemax, plateau, trap, twomax, Jump, LeadingOnes,
    LinearHarmonic, OneMax, Plateau, Trap, TwoMax,
};

use crate::bits::BitString;
use crate::error::{invalid, Error, Result};

pub trait Problem: Send + Sync {
    /// Registry id, e.g. `"jump"`.
    fn name(&self) -> &str;
    /// Human-readable instance descriptor, e.g. `"s=32,w=6"`.
    fn instance(&self) -> String;
    fn scale(&self) -> usize;
    /// Largest value `evaluate` can return.
    fn upper_bound(&self) -> u64;
    fn evaluate(&self, x: &BitString) -> u64;
}

/// Registry ids of the theory benchmarks, as accepted by [`make_problem`].
pub const PROBLEM_NAMES: [&str; 10] = [
    "onemax",
    "leadingones",
    "twomax",
    "trap",
    "jump",
    "plateau",
    "nqueens",
    "ising1d",
    "ising2d",
    "linharm",
];

/// Extra parameters some problems need. Unused fields must be `None`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProblemParams {
    /// Jump or plateau width.
    pub width: Option<u64>,
    /// Board side of `nqueens`; must satisfy `s = n^2`.
    pub queens: Option<usize>,
    /// Torus side of `ising2d`; must satisfy `s = N^2`.
    pub side: Option<usize>,
}

pub fn make_problem(name: &str, s: usize, params: ProblemParams) -> Result<Arc<dyn Problem>> {
    let needs_width = matches!(name, "jump" | "plateau");
    if needs_width != params.width.is_some() {
        return invalid(if needs_width {
            format!("{name} needs a width")
        } else {
            format!("{name} takes no width")
        });
    }
    if params.queens.is_some() && name != "nqueens" {
        return invalid(format!("{name} takes no queens parameter"));
    }
    if params.side.is_some() && name != "ising2d" {
        return invalid(format!("{name} takes no torus side"));
    }
    if s == 0 {
        return invalid("scale must be positive");
    }
    let p: Arc<dyn Problem> = match name {
        "onemax" => Arc::new(OneMax::new(s)),
        "leadingones" => Arc::new(LeadingOnes::new(s)),
        "twomax" => Arc::new(TwoMax::new(s)),
        "trap" => Arc::new(Trap::new(s)),
        "jump" => Arc::new(Jump::new(s, params.width.unwrap_or_default())?),
        "plateau" => Arc::new(Plateau::new(s, params.width.unwrap_or_default())?),
        "linharm" => Arc::new(LinearHarmonic::new(s)),
        "ising1d" => Arc::new(Ising::ring(s)?),
        "nqueens" => {
            let n = exact_sqrt(s).ok_or_else(|| {
                Error::InvalidArgument(format!("nqueens scale {s} is not a perfect square"))
            })?;
            if params.queens.is_some_and(|q| q != n) {
                return invalid(format!("nqueens scale {s} does not match n = {n}"));
            }
            Arc::new(NQueens::new(n)?)
        }
        "ising2d" => {
            let side = exact_sqrt(s).ok_or_else(|| {
                Error::InvalidArgument(format!("ising2d scale {s} is not a perfect square"))
            })?;
            if params.side.is_some_and(|q| q != side) {
                return invalid(format!("ising2d scale {s} does not match N = {side}"));
            }
            Arc::new(Ising::torus(side)?)
        }
        other => return invalid(format!("unknown problem {other:?}")),
    };
    Ok(p)
}

pub(crate) fn exact_sqrt(s: usize) -> Option<usize> {
    let r = (s as f64).sqrt().round() as usize;
    (r * r == s).then_some(r)
}

/// The jump / plateau widths used in experiments, as named rules over `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthRule {
    Fixed(u64),
    /// `floor(ln s)`
    LnS,
    /// `floor(ln s) + 1`
    LnS1,
    /// `floor(sqrt s)`
    SqrtS,
    /// `floor(sqrt s) + 1`
    SqrtS1,
    /// `floor(s / 2) - 1`
    HalfS1,
}

impl WidthRule {
    pub const SHORTCUTS: [&'static str; 5] = ["lnS", "lnS1", "sqrtS", "sqrtS1", "halfS1"];

    pub fn resolve(self, s: usize) -> u64 {
        let sf = s as f64;
        match self {
            Self::Fixed(w) => w,
            Self::LnS => sf.ln().floor() as u64,
            Self::LnS1 => sf.ln().floor() as u64 + 1,
            Self::SqrtS => sf.sqrt().floor() as u64,
            Self::SqrtS1 => sf.sqrt().floor() as u64 + 1,
            Self::HalfS1 => (s / 2) as u64 - 1,
        }
    }
}

impl FromStr for WidthRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lnS" => Self::LnS,
            "lnS1" => Self::LnS1,
            "sqrtS" => Self::SqrtS,
            "sqrtS1" => Self::SqrtS1,
            "halfS1" => Self::HalfS1,
            other => match other.parse::<u64>() {
                Ok(w) => Self::Fixed(w),
                Err(_) => {
                    return invalid(format!(
                        "width {other:?} is neither an integer nor one of {}",
                        Self::SHORTCUTS.join(", ")
                    ))
                }
            },
        })
    }
}

impl fmt::Display for WidthRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fixed(w) => write!(f, "{w}"),
            Self::LnS => f.write_str("lnS"),
            Self::LnS1 => f.write_str("lnS1"),
            Self::SqrtS => f.write_str("sqrtS"),
            Self::SqrtS1 => f.write_str("sqrtS1"),
            Self::HalfS1 => f.write_str("halfS1"),
        }
    }
}
