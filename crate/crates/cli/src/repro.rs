//! Canned scenarios with stored tolerances.

use std::process::ExitCode;

use clap::ValueEnum;
use ffa_core::algorithms::{self, AlgorithmConfig, AlgorithmId};
use ffa_core::harness::{execute, ExperimentSpec, ProblemSpec, RunRecord};
use ffa_core::problems::{make_problem, ProblemParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// SAGA, OneMax s=5000, 100 runs: mean 35590 FEs ± 10%.
    #[value(name = "onemax-saga-5000")]
    OnemaxSaga5000,
    /// GGA with p = 0.773581/s, OneMax s=5000, 100 runs: mean 38502 FEs ± 10%.
    #[value(name = "onemax-gga-5000")]
    OnemaxGga5000,
    /// SAGA, LeadingOnes s=100, 500 runs: mean 14980 FEs ± 10%.
    #[value(name = "leadingones-saga-100")]
    LeadingonesSaga100,
    /// FEA, GFGA, SAFGA: equal traces on OneMax/Trap/Jump(ω=6), s=32, 20 seeds.
    #[value(name = "trace-invariance")]
    TraceInvariance,
    /// FEA on TwoMax s ∈ {32, 64, 128}, 71 runs: all solved, mean < s² ln s.
    #[value(name = "twomax-fea")]
    TwomaxFea,
}

const TOLERANCE: f64 = 0.10;

fn grid(
    alg: AlgorithmId,
    problem: ProblemSpec,
    runs: usize,
    seed: u64,
    config: AlgorithmConfig,
    workers: usize,
) -> Vec<RunRecord> {
    let spec = ExperimentSpec {
        runs_per_cell: runs,
        base_seed: seed,
        config,
        ..ExperimentSpec::new(&[alg], vec![problem])
    };
    execute(&spec, workers).expect("scenario specs are valid")
}

fn mean(rs: &[RunRecord]) -> f64 {
    rs.iter().map(|r| r.used_fes as f64).sum::<f64>() / rs.len() as f64
}

struct MeanCase {
    alg: AlgorithmId,
    problem: &'static str,
    s: usize,
    runs: usize,
    target: f64,
    config: AlgorithmConfig,
}

fn check_mean(c: MeanCase, seed: u64, workers: usize) -> (bool, String) {
    let problem = ProblemSpec::benchmark(c.problem, &[c.s]);
    let recs = grid(c.alg, problem, c.runs, seed, c.config, workers);
    let solved = recs.iter().filter(|r| r.success).count();
    let m = mean(&recs);
    let target = c.target;
    (
        solved == c.runs && (m - target).abs() <= TOLERANCE * target,
        format!(
            "mean {m:.0} over {} runs ({solved} solved), expected {target} ± 10%",
            c.runs
        ),
    )
}

fn trace_invariance() -> (bool, String) {
    let problems: Vec<_> = [("onemax", None), ("trap", None), ("jump", Some(6))]
        .into_iter()
        .map(|(n, w)| {
            let params = ProblemParams {
                width: w,
                ..ProblemParams::default()
            };
            make_problem(n, 32, params).expect("valid problem")
        })
        .collect();
    let config = AlgorithmConfig::default();
    let mut equal = 0;
    let mut total = 0;
    for alg in [AlgorithmId::Fea, AlgorithmId::Gfga, AlgorithmId::Safga] {
        for seed in 0..20 {
            total += 1;
            let base = algorithms::trace(alg, &*problems[0], seed, 5_000, &config);
            if problems[1..]
                .iter()
                .all(|p| algorithms::trace(alg, &**p, seed, 5_000, &config) == base)
            {
                equal += 1;
            }
        }
    }
    (
        equal == total,
        format!("{equal}/{total} (algorithm, seed) pairs trace-equal over 5000 FEs"),
    )
}

fn twomax_fea(seed: u64, workers: usize) -> (bool, String) {
    let scales = [32, 64, 128];
    let recs = grid(
        AlgorithmId::Fea,
        ProblemSpec::benchmark("twomax", &scales),
        71,
        seed,
        AlgorithmConfig::default(),
        workers,
    );
    let mut pass = true;
    let mut parts = Vec::new();
    for s in scales {
        let cell: Vec<RunRecord> = recs.iter().filter(|r| r.scale == s).cloned().collect();
        let solved = cell.iter().filter(|r| r.success).count();
        let bound = (s * s) as f64 * (s as f64).ln();
        pass &= solved == cell.len() && mean(&cell) < bound;
        parts.push(format!(
            "s={s}: {solved}/{} solved, mean {:.0} < {bound:.0}",
            cell.len(),
            mean(&cell)
        ));
    }
    (pass, parts.join("; "))
}

pub fn run(scenario: Scenario, seed: u64, workers: usize) -> ExitCode {
    let default = AlgorithmConfig::default;
    let case = |alg, problem, s, runs, target, config| MeanCase {
        alg,
        problem,
        s,
        runs,
        target,
        config,
    };
    let (pass, detail) = match scenario {
        Scenario::OnemaxSaga5000 => check_mean(
            case(AlgorithmId::Saga, "onemax", 5000, 100, 35_590.0, default()),
            seed,
            workers,
        ),
        Scenario::OnemaxGga5000 => {
            let config = AlgorithmConfig {
                gga_rate_factor: Some(0.773581),
                ..default()
            };
            check_mean(
                case(AlgorithmId::Gga, "onemax", 5000, 100, 38_502.0, config),
                seed,
                workers,
            )
        }
        Scenario::LeadingonesSaga100 => check_mean(
            case(
                AlgorithmId::Saga,
                "leadingones",
                100,
                500,
                14_980.0,
                default(),
            ),
            seed,
            workers,
        ),
        Scenario::TraceInvariance => trace_invariance(),
        Scenario::TwomaxFea => twomax_fea(seed, workers),
    };
    let name = scenario.to_possible_value().expect("named");
    println!(
        "{} {}: {detail}",
        if pass { "PASS" } else { "FAIL" },
        name.get_name()
    );
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
