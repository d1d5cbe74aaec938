//! Frequency Fitness Assignment (FFA) for discrete black-box optimization.
//!
//! The crate provides bit-string operators, the benchmark problems, MAX-SAT
//! over DIMACS files, the frequency table, eight optimizers, an experiment
//! harness with CSV persistence, and the usual runtime statistics.

pub mod algorithms;
pub mod bits;
pub mod error;
pub mod ffa;
pub mod harness;
pub mod ops;
pub mod problems;
pub mod rng;
pub mod sat;
pub mod stats;

pub use algorithms::{AlgorithmConfig, AlgorithmId, Evaluator, Optimizer};
pub use bits::BitString;
pub use error::{Error, Result};
pub use ffa::FrequencyTable;
pub use harness::{ExperimentSpec, ProblemSpec, RunRecord};
pub use problems::{make_problem, Problem, ProblemParams, WidthRule};
pub use rng::Rng;
pub use sat::{CnfFormula, MaxSat};
