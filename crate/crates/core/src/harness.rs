//! Experiment grids: algorithms × problem instances × seeded runs, executed
//! on a bounded worker pool and persisted as CSV.
//!
//! Seeds are `(base ⊕ fnv1a(cell key)) + run`, where the cell key is
//! `problem/instance` (e.g. `jump/s=32,w=6`). The algorithm is not part of
//! the key, so all algorithms of a grid see the same seeds on a cell, and
//! adding cells never changes the seeds of existing ones. MAX-SAT runs use
//! the key `maxsat/<directory name>` and are spread round-robin over the
//! instance files: run `i` solves file `i mod F`.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{self, AlgorithmConfig, AlgorithmId};
use crate::error::{invalid, Error, Result};
use crate::problems::{make_problem, Problem, ProblemParams, WidthRule};
use crate::rng::derive_seed;
use crate::sat::{load_cnf_dir, MaxSat};

pub const DESK_BUDGET: u64 = 10_000_000;
pub const DESK_RUNS: usize = 100;

pub const CSV_HEADER: [&str; 9] = [
    "algorithm",
    "problem",
    "instance",
    "scale",
    "seed",
    "budget_fes",
    "used_fes",
    "best_f",
    "success",
];

/// Outcome of one run.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub problem: String,
    pub instance: String,
    pub scale: usize,
    pub seed: u64,
    pub budget_fes: u64,
    pub used_fes: u64,
    pub best_f: u64,
    pub success: bool,
}

impl RunRecord {
    fn check(&self) -> std::result::Result<(), String> {
        if self.success != (self.best_f == 0) {
            return Err(format!(
                "success={} contradicts best_f={}",
                self.success, self.best_f
            ));
        }
        if self.used_fes > self.budget_fes {
            return Err(format!(
                "used_fes {} exceeds budget_fes {}",
                self.used_fes, self.budget_fes
            ));
        }
        if self.used_fes == 0 {
            return Err("used_fes must be at least 1".into());
        }
        Ok(())
    }

    fn sort_key(&self) -> (&str, &str, &str, u64) {
        (&self.algorithm, &self.problem, &self.instance, self.seed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSpec {
    /// A theory benchmark at several scales. `widths` must be non-empty for
    /// jump and plateau and empty otherwise; every width is run at every
    /// scale.
    Benchmark {
        name: String,
        scales: Vec<usize>,
        widths: Vec<WidthRule>,
    },
    /// Every `*.cnf` file of a directory.
    MaxSat { dir: PathBuf },
}

impl ProblemSpec {
    pub fn benchmark(name: &str, scales: &[usize]) -> Self {
        Self::Benchmark {
            name: name.to_string(),
            scales: scales.to_vec(),
            widths: Vec::new(),
        }
    }

    pub fn with_widths(name: &str, scales: &[usize], widths: &[WidthRule]) -> Self {
        Self::Benchmark {
            name: name.to_string(),
            scales: scales.to_vec(),
            widths: widths.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub algorithms: Vec<AlgorithmId>,
    pub problems: Vec<ProblemSpec>,
    pub runs_per_cell: usize,
    pub budget: u64,
    pub base_seed: u64,
    pub config: AlgorithmConfig,
}

impl ExperimentSpec {
    pub fn new(algorithms: &[AlgorithmId], problems: Vec<ProblemSpec>) -> Self {
        Self {
            algorithms: algorithms.to_vec(),
            problems,
            runs_per_cell: DESK_RUNS,
            budget: DESK_BUDGET,
            base_seed: 0,
            config: AlgorithmConfig::default(),
        }
    }
}

/// A fully resolved run, ready to execute.
#[derive(Clone)]
pub struct Job {
    pub algorithm: AlgorithmId,
    pub problem: Arc<dyn Problem>,
    pub seed: u64,
}

impl std::fmt::Debug for Job {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Job")
            .field("algorithm", &self.algorithm)
            .field("problem", &self.problem.name())
            .field("instance", &self.problem.instance())
            .field("seed", &self.seed)
            .finish()
    }
}

/// Expands the grid and validates every cell; nothing runs yet.
pub fn plan(spec: &ExperimentSpec) -> Result<Vec<Job>> {
    if spec.algorithms.is_empty() {
        return invalid("no algorithms given");
    }
    if spec.problems.is_empty() {
        return invalid("no problems given");
    }
    if spec.runs_per_cell == 0 {
        return invalid("runs per cell must be at least 1");
    }
    if spec.budget == 0 {
        return invalid("budget must be at least 1 FE");
    }
    if let Some(f) = spec.config.gga_rate_factor {
        if !(f.is_finite() && f > 0.0) {
            return invalid(format!("GGA rate factor {f} must be positive"));
        }
    }
    let runs = spec.runs_per_cell as u64;

    // (problem, seed) pairs shared by all algorithms.
    let mut cells: Vec<(Arc<dyn Problem>, u64)> = Vec::new();
    for p in &spec.problems {
        match p {
            ProblemSpec::Benchmark {
                name,
                scales,
                widths,
            } => {
                if scales.is_empty() {
                    return invalid(format!("{name}: no scales given"));
                }
                let width_opts: Vec<Option<WidthRule>> = if widths.is_empty() {
                    vec![None]
                } else {
                    widths.iter().copied().map(Some).collect()
                };
                for &s in scales {
                    for w in &width_opts {
                        let params = ProblemParams {
                            width: w.map(|w| w.resolve(s)),
                            ..ProblemParams::default()
                        };
                        let problem = make_problem(name, s, params).map_err(|e| match e {
                            Error::InvalidArgument(m) if w.is_some() => Error::InvalidArgument(
                                format!("{m} (width rule {} at s={s})", w.unwrap()),
                            ),
                            other => other,
                        })?;
                        let key = format!("{name}/{}", problem.instance());
                        for r in 0..runs {
                            cells.push((problem.clone(), derive_seed(spec.base_seed, &key, r)));
                        }
                    }
                }
            }
            ProblemSpec::MaxSat { dir } => {
                let files = load_cnf_dir(dir)?;
                if files.is_empty() {
                    return invalid(format!("no .cnf files in {}", dir.display()));
                }
                let instances: Vec<Arc<dyn Problem>> = files
                    .iter()
                    .map(|(name, f)| Arc::new(MaxSat::new(name.clone(), f)) as Arc<dyn Problem>)
                    .collect();
                let dir_name = dir
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default();
                let key = format!("maxsat/{dir_name}");
                for r in 0..runs {
                    let p = instances[(r % instances.len() as u64) as usize].clone();
                    cells.push((p, derive_seed(spec.base_seed, &key, r)));
                }
            }
        }
    }

    let mut jobs = Vec::with_capacity(cells.len() * spec.algorithms.len());
    for &algorithm in &spec.algorithms {
        for (problem, seed) in &cells {
            jobs.push(Job {
                algorithm,
                problem: problem.clone(),
                seed: *seed,
            });
        }
    }
    Ok(jobs)
}

/// Runs the grid on `workers` threads and reports progress to stderr.
pub fn execute(spec: &ExperimentSpec, workers: usize) -> Result<Vec<RunRecord>> {
    execute_with(spec, workers, &|done, total| {
        if done == total || done % (total / 20).max(1) == 0 {
            eprintln!("[{done}/{total}] runs finished");
        }
    })
}

/// As [`execute`], calling `progress(done, total)` after every finished run.
pub fn execute_with(
    spec: &ExperimentSpec,
    workers: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<RunRecord>> {
    let jobs = plan(spec)?;
    run_jobs(&jobs, spec.budget, &spec.config, workers, progress)
}

/// Executes resolved jobs; results are sorted by
/// `(algorithm, problem, instance, seed)`.
pub fn run_jobs(
    jobs: &[Job],
    budget: u64,
    config: &AlgorithmConfig,
    workers: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<Vec<RunRecord>> {
    let never = AtomicBool::new(false);
    Ok(run_jobs_until(jobs, budget, config, workers, progress, &never)?.0)
}

/// As [`run_jobs`], but jobs not yet started are skipped once `stop` is set.
/// Runs already in flight finish. Returns the completed records and whether
/// every job ran.
pub fn run_jobs_until(
    jobs: &[Job],
    budget: u64,
    config: &AlgorithmConfig,
    workers: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
    stop: &AtomicBool,
) -> Result<(Vec<RunRecord>, bool)> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let total = jobs.len();
    let done = AtomicUsize::new(0);
    let results = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                if stop.load(Ordering::Relaxed) {
                    return Ok(None);
                }
                let r = algorithms::run(job.algorithm, &*job.problem, job.seed, budget, config)?;
                progress(done.fetch_add(1, Ordering::Relaxed) + 1, total);
                Ok(Some(r))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let complete = results.iter().all(Option::is_some);
    let mut records: Vec<RunRecord> = results.into_iter().flatten().collect();
    sort_records(&mut records);
    Ok((records, complete))
}

pub fn sort_records(records: &mut [RunRecord]) {
    records.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

pub fn write_csv<W: Write>(records: &[RunRecord], sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads records written by [`write_csv`]. Line numbers in errors count the
/// header as line 1.
pub fn read_csv<R: Read>(source: R) -> Result<Vec<RunRecord>> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let header = rd.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header {}", CSV_HEADER.join(",")),
        });
    }
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<RunRecord>().enumerate() {
        let line = i + 2;
        let rec = row.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        rec.check()
            .map_err(|message| Error::Parse { line, message })?;
        out.push(rec);
    }
    Ok(out)
}
