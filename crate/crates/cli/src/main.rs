//! `ffa`: run experiment grids, summarize results, and replay the reference
//! scenarios.

mod args;
mod repro;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use anyhow::Context;
use clap::builder::PossibleValuesParser;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use ffa_core::algorithms::{CrossoverGate, Overwrite};
use ffa_core::harness::{self, plan, read_csv, write_csv, ExperimentSpec, ProblemSpec};
use ffa_core::problems::{WidthRule, PROBLEM_NAMES};
use ffa_core::stats::{self, format_value, Grouping, PlotMetric, UNDEFINED};
use ffa_core::{AlgorithmConfig, AlgorithmId, Error};

use args::{parse_count, parse_rate_factor, problem_names};

#[derive(Parser, Debug)]
#[command(
    name = "ffa",
    version,
    about = "Frequency fitness assignment experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an algorithm × scale × seed grid on one problem and write CSV.
    Run(RunArgs),
    /// Summarize a result CSV.
    Report(ReportArgs),
    /// List the registered algorithms, problems and scenarios.
    List,
    /// Replay a reference scenario and check it against its tolerance.
    Repro(ReproArgs),
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Algorithms, comma-separated.
    #[arg(long, required = true, value_delimiter = ',',
          value_parser = PossibleValuesParser::new(AlgorithmId::NAMES))]
    algo: Vec<String>,
    #[arg(long, value_parser = PossibleValuesParser::new(problem_names()))]
    problem: String,
    /// Bit-string lengths, comma-separated.
    #[arg(long, value_delimiter = ',')]
    scales: Vec<usize>,
    /// Jump/plateau widths: integers or the shortcuts lnS, lnS1, sqrtS,
    /// sqrtS1, halfS1.
    #[arg(long, value_delimiter = ',')]
    omega: Vec<WidthRule>,
    /// N-Queens board sides (scale n²), instead of --scales.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// 2D Ising torus sides (scale N²), instead of --scales.
    #[arg(long = "N", value_delimiter = ',')]
    torus: Vec<usize>,
    /// Directory of DIMACS *.cnf files for maxsat.
    #[arg(long)]
    cnf_dir: Option<PathBuf>,
    /// Runs per cell.
    #[arg(long, default_value = "100", value_parser = parse_count)]
    runs: u64,
    /// FE budget per run; scientific notation allowed (1e7).
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    budget: u64,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV, or - for stdout.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    parallel: Option<usize>,
    /// GGA/GFGA mutation rate as a multiple of 1/s (e.g. 0.773581 or
    /// 0.773581/s).
    #[arg(long, value_parser = parse_rate_factor)]
    gga_p: Option<f64>,
    #[arg(long, value_enum, default_value_t = Gate::Fitness)]
    gfga_gate: Gate,
    #[arg(long, value_enum, default_value_t = OverwriteRule::AtLeastAsGood)]
    eafea_overwrite: OverwriteRule,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Gate {
    /// Crossover when the parents' frequency fitnesses are equal.
    Fitness,
    /// Crossover when the parents' objective values are equal.
    Objective,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OverwriteRule {
    /// FEA offspring at least as good as the EA's solution.
    AtLeastAsGood,
    /// FEA offspring exactly as good.
    Equal,
}

#[derive(clap::Args, Debug)]
struct ReportArgs {
    /// Result CSV written by `run`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    metric: Metric,
    /// FFA and pure algorithm for the slowdown metric, as ffa:pure.
    #[arg(long)]
    pair: Option<String>,
    /// Cell grouping for mean, ert and success.
    #[arg(long, value_enum, default_value_t = By::Instance)]
    by: By,
    /// Emit long-format plot data (algorithm,problem,scale,metric,value).
    #[arg(long)]
    plot: bool,
    /// Output CSV, or - for stdout.
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Metric {
    /// Mean FEs over successful runs.
    Mean,
    /// Expected runtime: all FEs over successes.
    Ert,
    /// Fraction of successful runs.
    Success,
    /// mean(ffa) / ((s+1) mean(pure)); needs --pair.
    Slowdown,
    /// Worst-case runtime exponent over scales; ∅ if any run failed.
    T,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum By {
    Instance,
    Scale,
}

#[derive(clap::Args, Debug)]
struct ReproArgs {
    #[arg(value_enum)]
    name: repro::Scenario,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    parallel: Option<usize>,
}

/// Exits with status 2, printing the usage of subcommand `sub`.
fn usage(sub: &str, kind: ErrorKind, msg: impl std::fmt::Display) -> ! {
    let mut cmd = Cli::command();
    cmd.build();
    cmd.find_subcommand_mut(sub)
        .expect("known subcommand")
        .error(kind, msg)
        .exit()
}

fn workers(sub: &str, parallel: Option<usize>) -> usize {
    match parallel {
        Some(0) => usage(
            sub,
            ErrorKind::ValueValidation,
            "--parallel must be at least 1",
        ),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn open_out(path: &Path) -> anyhow::Result<Box<dyn Write>> {
    Ok(if path == Path::new("-") {
        Box::new(BufWriter::new(io::stdout().lock()))
    } else {
        Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        ))
    })
}

fn resolve_problem(a: &RunArgs) -> ProblemSpec {
    let p = a.problem.as_str();
    let conflict = |msg: String| usage("run", ErrorKind::ArgumentConflict, msg);
    if !a.omega.is_empty() && !matches!(p, "jump" | "plateau") {
        conflict(format!("--omega applies to jump and plateau, not {p}"));
    }
    if !a.n.is_empty() && p != "nqueens" {
        conflict(format!("--n applies to nqueens, not {p}"));
    }
    if !a.torus.is_empty() && p != "ising2d" {
        conflict(format!("--N applies to ising2d, not {p}"));
    }
    if a.cnf_dir.is_some() != (p == "maxsat") {
        conflict(if p == "maxsat" {
            "maxsat needs --cnf-dir".into()
        } else {
            format!("--cnf-dir applies to maxsat, not {p}")
        });
    }
    if p == "maxsat" {
        if !a.scales.is_empty() {
            conflict("maxsat takes its scale from the instance files; drop --scales".into());
        }
        return ProblemSpec::MaxSat {
            dir: a.cnf_dir.clone().expect("checked above"),
        };
    }
    let sides = if p == "nqueens" { &a.n } else { &a.torus };
    let scales: Vec<usize> = if sides.is_empty() {
        a.scales.clone()
    } else if a.scales.is_empty() {
        sides.iter().map(|k| k * k).collect()
    } else {
        conflict(format!("give either --scales or the {p} side, not both"))
    };
    if scales.is_empty() {
        usage(
            "run",
            ErrorKind::MissingRequiredArgument,
            format!(
                "{p} needs --scales{}",
                match p {
                    "nqueens" => " or --n",
                    "ising2d" => " or --N",
                    _ => "",
                }
            ),
        );
    }
    if matches!(p, "jump" | "plateau") && a.omega.is_empty() {
        usage(
            "run",
            ErrorKind::MissingRequiredArgument,
            format!(
                "{p} needs --omega: an integer width or one of the shortcuts {}",
                WidthRule::SHORTCUTS.join(", ")
            ),
        );
    }
    ProblemSpec::with_widths(p, &scales, &a.omega)
}

fn cmd_run(a: RunArgs) -> anyhow::Result<ExitCode> {
    let algorithms: Vec<AlgorithmId> = a
        .algo
        .iter()
        .map(|s| s.parse().expect("restricted by the parser"))
        .collect();
    let problem = resolve_problem(&a);
    let spec = ExperimentSpec {
        algorithms,
        problems: vec![problem],
        runs_per_cell: usize::try_from(a.runs).unwrap_or(usize::MAX),
        budget: a.budget,
        base_seed: a.seed,
        config: AlgorithmConfig {
            gga_rate_factor: a.gga_p,
            gfga_gate: match a.gfga_gate {
                Gate::Fitness => CrossoverGate::Fitness,
                Gate::Objective => CrossoverGate::Objective,
            },
            eafea_overwrite: match a.eafea_overwrite {
                OverwriteRule::AtLeastAsGood => Overwrite::AtLeastAsGood,
                OverwriteRule::Equal => Overwrite::Equal,
            },
        },
    };
    let jobs = match plan(&spec) {
        Ok(j) => j,
        Err(Error::Io(e)) => return Err(e).context("reading the instance directory"),
        Err(e @ Error::Parse { .. }) => return Err(e).context("reading the instance directory"),
        Err(e) => usage("run", ErrorKind::ValueValidation, e),
    };
    let w = workers("run", a.parallel);
    let mut out = open_out(&a.out)?;
    print_spec(&spec, &jobs, w);

    let stop = Arc::new(AtomicBool::new(false));
    {
        let stop = stop.clone();
        // Finish the runs in flight, skip the rest, and write what we have.
        ctrlc::set_handler(move || {
            eprintln!("interrupted: finishing runs in flight");
            stop.store(true, Ordering::Relaxed);
        })
        .context("installing the interrupt handler")?;
    }
    let total = jobs.len();
    let step = (total / 20).max(1);
    let (records, complete) = harness::run_jobs_until(
        &jobs,
        spec.budget,
        &spec.config,
        w,
        &|done, total| {
            if done == total || done % step == 0 {
                eprintln!("[{done}/{total}] runs finished");
            }
        },
        &stop,
    )?;
    write_csv(&records, &mut out).context("writing results")?;
    out.flush().context("writing results")?;
    eprintln!("wrote {} records to {}", records.len(), a.out.display());
    if complete {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{} of {total} runs were skipped", total - records.len());
        Ok(ExitCode::from(130))
    }
}

fn print_spec(spec: &ExperimentSpec, jobs: &[harness::Job], workers: usize) {
    let names: Vec<&str> = spec.algorithms.iter().map(|a| a.name()).collect();
    eprintln!(
        "# algorithms={} runs={} budget={} base_seed={} workers={}",
        names.join(","),
        spec.runs_per_cell,
        spec.budget,
        spec.base_seed,
        workers
    );
    let c = &spec.config;
    eprintln!(
        "# gga_rate={}/s gfga_gate={:?} eafea_overwrite={:?}",
        c.gga_rate_factor
            .unwrap_or(ffa_core::algorithms::GOLDEN_RATE_FACTOR),
        c.gfga_gate,
        c.eafea_overwrite
    );
    // Seeds do not depend on the algorithm; list the first algorithm's jobs.
    let first = spec.algorithms[0];
    let mut runs = jobs.iter().filter(|j| j.algorithm == first).peekable();
    while let Some(j) = runs.next() {
        let mut last = j.seed;
        let mut count = 1;
        let mut insts = vec![j.problem.instance()];
        let is_sat = j.problem.name() == "maxsat";
        while let Some(next) = runs.peek() {
            let same_cell = if is_sat {
                next.problem.name() == "maxsat"
            } else {
                next.problem.instance() == j.problem.instance()
            };
            if !same_cell {
                break;
            }
            last = next.seed;
            count += 1;
            if is_sat && !insts.contains(&next.problem.instance()) {
                insts.push(next.problem.instance());
            }
            runs.next();
        }
        if is_sat {
            eprintln!(
                "# cell maxsat over {} files: {count} runs, seeds {}..={last} (run i uses file i mod {})",
                insts.len(),
                j.seed,
                insts.len()
            );
        } else {
            eprintln!(
                "# cell {}/{}: {count} runs, seeds {}..={last}",
                j.problem.name(),
                j.problem.instance(),
                j.seed
            );
        }
    }
}

fn cmd_report(a: ReportArgs) -> anyhow::Result<ExitCode> {
    let pair = match (a.metric, &a.pair) {
        (Metric::Slowdown, None) => usage(
            "report",
            ErrorKind::MissingRequiredArgument,
            "--metric slowdown needs --pair ffa:pure",
        ),
        (Metric::Slowdown, Some(p)) => Some(parse_pair(p)),
        (m, Some(_)) => usage(
            "report",
            ErrorKind::ArgumentConflict,
            format!(
                "--pair only applies to --metric slowdown, not {}",
                m.to_possible_value().expect("named").get_name()
            ),
        ),
        _ => None,
    };
    if a.plot && !matches!(a.metric, Metric::Mean | Metric::Ert | Metric::Success) {
        usage(
            "report",
            ErrorKind::ArgumentConflict,
            "--plot applies to mean, ert and success",
        );
    }
    let file =
        File::open(&a.input).with_context(|| format!("cannot open {}", a.input.display()))?;
    let records = read_csv(file).with_context(|| format!("reading {}", a.input.display()))?;
    let mut out = open_out(&a.out)?;
    let by = match a.by {
        By::Instance => Grouping::Instance,
        By::Scale => Grouping::Scale,
    };
    match a.metric {
        Metric::Mean | Metric::Ert | Metric::Success if a.plot => {
            let metric = match a.metric {
                Metric::Mean => PlotMetric::Mean,
                Metric::Ert => PlotMetric::Ert,
                _ => PlotMetric::Success,
            };
            stats::plot_data(
                &stats::summarize(&records, Grouping::Scale),
                &[metric],
                &mut out,
            )?;
        }
        Metric::Mean | Metric::Ert | Metric::Success => {
            let mut w = csv::Writer::from_writer(&mut out);
            let name = format!("{:?}", a.metric).to_lowercase();
            w.write_record([
                "algorithm",
                "problem",
                "instance",
                "scale",
                "n_runs",
                "n_success",
                name.as_str(),
            ])?;
            for c in stats::summarize(&records, by) {
                let value = match a.metric {
                    Metric::Mean => c.mean_used_fes_success.map(format_value),
                    Metric::Ert => Some(format_value(c.ert)),
                    _ => Some(format_value(c.success_rate())),
                };
                w.write_record([
                    c.algorithm.as_str(),
                    &c.problem,
                    c.instance.as_deref().unwrap_or("*"),
                    &c.scale.to_string(),
                    &c.n_runs.to_string(),
                    &c.n_success.to_string(),
                    value.as_deref().unwrap_or(UNDEFINED),
                ])?;
            }
        }
        Metric::Slowdown => {
            let (ffa, pure) = pair.expect("checked above");
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["problem", "scale", "ffa", "pure", "slowdown"])?;
            for row in stats::slowdown_table(&records, ffa.name(), pure.name()) {
                w.write_record([
                    row.problem.as_str(),
                    &row.scale.to_string(),
                    ffa.name(),
                    pure.name(),
                    &row.ratio.map_or(UNDEFINED.to_string(), format_value),
                ])?;
            }
        }
        Metric::T => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["algorithm", "problem", "scales", "t"])?;
            for row in stats::exponent_table(&records) {
                let scales: Vec<String> = row.scales.iter().map(|s| s.to_string()).collect();
                w.write_record([
                    row.algorithm.as_str(),
                    &row.problem,
                    &scales.join(";"),
                    &row.t.map_or(UNDEFINED.to_string(), |t| format!("{t:.3}")),
                ])?;
            }
        }
    }
    out.flush().context("writing the report")?;
    Ok(ExitCode::SUCCESS)
}

fn parse_pair(p: &str) -> (AlgorithmId, AlgorithmId) {
    let parsed = p.split_once(':').and_then(|(a, b)| {
        Some((
            a.parse::<AlgorithmId>().ok()?,
            b.parse::<AlgorithmId>().ok()?,
        ))
    });
    match parsed {
        Some(pair) => pair,
        None => usage(
            "report",
            ErrorKind::ValueValidation,
            format!(
                "--pair {p:?} must be ffa:pure with algorithms from {}",
                AlgorithmId::NAMES.join(", ")
            ),
        ),
    }
}

fn cmd_list() -> ExitCode {
    println!("algorithms:");
    for a in AlgorithmId::ALL {
        let kind = if !a.uses_ffa() {
            "pure".to_string()
        } else {
            format!(
                "frequency fitness, pure counterpart {}",
                a.pure_counterpart()
            )
        };
        println!("  {:<8} {kind}", a.name());
    }
    println!("problems:");
    for p in PROBLEM_NAMES {
        let extra = match p {
            "jump" | "plateau" => " (--omega)",
            "nqueens" => " (--n, scale n²)",
            "ising2d" => " (--N, scale N²)",
            _ => "",
        };
        println!("  {p}{extra}");
    }
    println!("  maxsat (--cnf-dir)");
    println!("width shortcuts: {}", WidthRule::SHORTCUTS.join(", "));
    println!("repro scenarios:");
    for s in repro::Scenario::value_variants() {
        let v = s.to_possible_value().expect("no skipped variants");
        println!(
            "  {:<22} {}",
            v.get_name(),
            v.get_help().map(|h| h.to_string()).unwrap_or_default()
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Report(a) => cmd_report(a),
        Command::List => Ok(cmd_list()),
        Command::Repro(a) => Ok(repro::run(a.name, a.seed, workers("repro", a.parallel))),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
