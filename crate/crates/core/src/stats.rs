//! Summary statistics over run records: mean runtime, success rate, ERT,
//! the FFA slowdown ratio and the runtime exponent.
//!
//! "Mean runtime" is always the mean over successful runs; ERT is reported
//! next to it for cells with failures.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::harness::RunRecord;

/// Empirical expected runtime: all FEs spent, successful or not, divided by
/// the number of successes. Infinite without successes.
pub fn ert(records: &[RunRecord]) -> Result<f64> {
    if records.is_empty() {
        return invalid("ERT of an empty cell");
    }
    let total: u64 = records.iter().map(|r| r.used_fes).sum();
    let successes = records.iter().filter(|r| r.success).count();
    Ok(if successes == 0 {
        f64::INFINITY
    } else {
        total as f64 / successes as f64
    })
}

fn mean_fes(records: &[RunRecord]) -> f64 {
    records.iter().map(|r| r.used_fes as f64).sum::<f64>() / records.len() as f64
}

/// `mean(ffa) / ((s + 1) mean(pure))`; both cells must be non-empty and
/// fully successful.
pub fn slowdown_ratio(ffa: &[RunRecord], pure: &[RunRecord], s: usize) -> Result<f64> {
    if ffa.is_empty() || pure.is_empty() {
        return invalid("slowdown ratio of an empty cell");
    }
    if let Some(r) = ffa.iter().chain(pure).find(|r| !r.success) {
        return Err(Error::Undefined(format!(
            "{} run with seed {} on {} failed",
            r.algorithm, r.seed, r.instance
        )));
    }
    Ok(mean_fes(ffa) / ((s as f64 + 1.0) * mean_fes(pure)))
}

/// `max over s of log_s(worst runtime at s)`, or `None` if any run failed.
/// `cells` pairs each scale with its runs.
pub fn exponent_t(cells: &[(usize, &[RunRecord])]) -> Result<Option<f64>> {
    if cells.is_empty() {
        return invalid("exponent over no scales");
    }
    let mut t = f64::NEG_INFINITY;
    for &(s, runs) in cells {
        if s < 2 {
            return invalid(format!("exponent needs scales >= 2, got {s}"));
        }
        if runs.is_empty() {
            return invalid(format!("no runs at scale {s}"));
        }
        if runs.iter().any(|r| !r.success) {
            return Ok(None);
        }
        let worst = runs.iter().map(|r| r.used_fes).max().unwrap_or(1);
        t = t.max((worst as f64).ln() / (s as f64).ln());
    }
    Ok(Some(t))
}

/// How records are grouped into cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Grouping {
    /// One cell per (algorithm, problem, instance).
    #[default]
    Instance,
    /// One cell per (algorithm, problem, scale), pooling instances; used for
    /// MAX-SAT where every file is its own instance.
    Scale,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellSummary {
    pub algorithm: String,
    pub problem: String,
    /// `None` when instances were pooled per scale.
    pub instance: Option<String>,
    pub scale: usize,
    pub n_runs: usize,
    pub n_success: usize,
    /// Mean FEs of the successful runs; `None` without successes.
    pub mean_used_fes_success: Option<f64>,
    pub ert: f64,
    pub max_used_fes: u64,
}

impl CellSummary {
    pub fn success_rate(&self) -> f64 {
        self.n_success as f64 / self.n_runs as f64
    }

    fn of(records: &[RunRecord], instance: Option<String>) -> Self {
        let first = &records[0];
        let ok: Vec<&RunRecord> = records.iter().filter(|r| r.success).collect();
        Self {
            algorithm: first.algorithm.clone(),
            problem: first.problem.clone(),
            instance,
            scale: first.scale,
            n_runs: records.len(),
            n_success: ok.len(),
            mean_used_fes_success: (!ok.is_empty())
                .then(|| ok.iter().map(|r| r.used_fes as f64).sum::<f64>() / ok.len() as f64),
            ert: ert(records).expect("cells are non-empty"),
            max_used_fes: records.iter().map(|r| r.used_fes).max().unwrap_or(0),
        }
    }
}

type CellKey = (String, String, usize, String);

/// Records grouped into cells, ordered by (algorithm, problem, scale, instance).
pub fn cells(records: &[RunRecord], by: Grouping) -> BTreeMap<CellKey, Vec<RunRecord>> {
    let mut map: BTreeMap<CellKey, Vec<RunRecord>> = BTreeMap::new();
    for r in records {
        let inst = match by {
            Grouping::Instance => r.instance.clone(),
            Grouping::Scale => String::new(),
        };
        map.entry((r.algorithm.clone(), r.problem.clone(), r.scale, inst))
            .or_default()
            .push(r.clone());
    }
    map
}

pub fn summarize(records: &[RunRecord], by: Grouping) -> Vec<CellSummary> {
    cells(records, by)
        .into_iter()
        .map(|((_, _, _, inst), rs)| {
            CellSummary::of(&rs, (by == Grouping::Instance).then_some(inst))
        })
        .collect()
}

pub fn write_summary_csv<W: Write>(summaries: &[CellSummary], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for s in summaries {
        w.serialize(s)?;
    }
    if summaries.is_empty() {
        w.write_record([
            "algorithm",
            "problem",
            "instance",
            "scale",
            "n_runs",
            "n_success",
            "mean_used_fes_success",
            "ert",
            "max_used_fes",
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlotMetric {
    Mean,
    Ert,
    Success,
    Max,
}

impl PlotMetric {
    pub const ALL: [PlotMetric; 4] = [Self::Mean, Self::Ert, Self::Success, Self::Max];

    pub fn name(self) -> &'static str {
        match self {
            Self::Mean => "mean",
            Self::Ert => "ert",
            Self::Success => "success",
            Self::Max => "max",
        }
    }

    fn value(self, c: &CellSummary) -> Option<f64> {
        match self {
            Self::Mean => c.mean_used_fes_success,
            Self::Ert => Some(c.ert),
            Self::Success => Some(c.success_rate()),
            Self::Max => Some(c.max_used_fes as f64),
        }
    }
}

/// Plot-ready long-format CSV `algorithm,problem,scale,metric,value`, rows
/// ascending by scale. Cells without a defined value are skipped. Intended
/// for summaries grouped by scale.
pub fn plot_data<W: Write>(
    summaries: &[CellSummary],
    metrics: &[PlotMetric],
    sink: W,
) -> Result<()> {
    let mut rows: Vec<(usize, &str, &str, PlotMetric, f64)> = Vec::new();
    for c in summaries {
        for &m in metrics {
            if let Some(v) = m.value(c) {
                rows.push((c.scale, &c.algorithm, &c.problem, m, v));
            }
        }
    }
    rows.sort_by(|a, b| (a.0, a.1, a.2, a.3).cmp(&(b.0, b.1, b.2, b.3)));
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["algorithm", "problem", "scale", "metric", "value"])?;
    for (s, a, p, m, v) in rows {
        w.write_record([a, p, &s.to_string(), m.name(), &format_value(v)])?;
    }
    w.flush()?;
    Ok(())
}

/// Numbers as written to report CSVs; infinity becomes `inf`.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v}")
    }
}

/// Marker for an undefined statistic (some runs failed).
pub const UNDEFINED: &str = "∅";

/// One row of a slowdown table: the ratio for one (problem, scale) cell, or
/// `None` where it is undefined.
#[derive(Clone, Debug, PartialEq)]
pub struct SlowdownRow {
    pub problem: String,
    pub scale: usize,
    pub ratio: Option<f64>,
}

/// Slowdown of `ffa` against `pure` for every (problem, scale) both ran on.
pub fn slowdown_table(records: &[RunRecord], ffa: &str, pure: &str) -> Vec<SlowdownRow> {
    let cells = cells(records, Grouping::Scale);
    let mut rows = Vec::new();
    for ((alg, problem, scale, _), runs) in &cells {
        if alg != ffa {
            continue;
        }
        let key = (pure.to_string(), problem.clone(), *scale, String::new());
        if let Some(p) = cells.get(&key) {
            rows.push(SlowdownRow {
                problem: problem.clone(),
                scale: *scale,
                ratio: slowdown_ratio(runs, p, *scale).ok(),
            });
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentRow {
    pub algorithm: String,
    pub problem: String,
    pub scales: Vec<usize>,
    pub t: Option<f64>,
}

/// Runtime exponent per (algorithm, problem) over all scales present. Scales
/// below 2 are ignored.
pub fn exponent_table(records: &[RunRecord]) -> Vec<ExponentRow> {
    let mut by_series: BTreeMap<(String, String), BTreeMap<usize, Vec<RunRecord>>> =
        BTreeMap::new();
    for r in records.iter().filter(|r| r.scale >= 2) {
        by_series
            .entry((r.algorithm.clone(), r.problem.clone()))
            .or_default()
            .entry(r.scale)
            .or_default()
            .push(r.clone());
    }
    by_series
        .into_iter()
        .map(|((algorithm, problem), scales)| {
            let cells: Vec<(usize, &[RunRecord])> =
                scales.iter().map(|(s, rs)| (*s, rs.as_slice())).collect();
            ExponentRow {
                algorithm,
                problem,
                scales: scales.keys().copied().collect(),
                t: exponent_t(&cells).expect("cells are non-empty with scale >= 2"),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(alg: &str, s: usize, used: u64, success: bool) -> RunRecord {
        RunRecord {
            algorithm: alg.into(),
            problem: "onemax".into(),
            instance: format!("s={s}"),
            scale: s,
            seed: used,
            budget_fes: 10_000,
            used_fes: used,
            best_f: u64::from(!success),
            success,
        }
    }

    #[test]
    fn ert_examples() {
        assert_eq!(ert(&[rec("ea", 8, 100, true)]).unwrap(), 100.0);
        assert_eq!(
            ert(&[rec("ea", 8, 100, true), rec("ea", 8, 1000, false)]).unwrap(),
            1100.0
        );
        assert_eq!(ert(&[rec("ea", 8, 1000, false)]).unwrap(), f64::INFINITY);
        assert!(ert(&[]).is_err());
    }

    #[test]
    fn slowdown_examples() {
        let a = [rec("fea", 9, 50, true), rec("fea", 9, 150, true)];
        let b = [rec("ea", 9, 100, true)];
        assert!((slowdown_ratio(&a, &b, 9).unwrap() - 0.1).abs() < 1e-12);
        let c = [rec("fea", 9, 1000, true)];
        assert!((slowdown_ratio(&c, &b, 9).unwrap() - 1.0).abs() < 1e-12);
        let failed = [rec("ea", 9, 100, false)];
        assert!(matches!(
            slowdown_ratio(&a, &failed, 9),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn exponent_examples() {
        let a = [rec("ea", 10, 1000, true)];
        let b = [rec("ea", 100, 10_000, true), rec("ea", 100, 10, true)];
        let t = exponent_t(&[(10, &a[..]), (100, &b[..])]).unwrap().unwrap();
        assert!((t - 3.0).abs() < 1e-12);
        let sq = [rec("ea", 16, 256, true)];
        assert!((exponent_t(&[(16, &sq[..])]).unwrap().unwrap() - 2.0).abs() < 1e-12);
        let f = [rec("ea", 100, 10_000, false)];
        assert_eq!(exponent_t(&[(10, &a[..]), (100, &f[..])]).unwrap(), None);
        assert!(exponent_t(&[(1, &a[..])]).is_err());
    }

    #[test]
    fn single_record_summary() {
        let s = summarize(&[rec("ea", 8, 77, true)], Grouping::Instance);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].mean_used_fes_success, Some(77.0));
        assert_eq!(s[0].ert, 77.0);
        assert_eq!(s[0].success_rate(), 1.0);
    }

    #[test]
    fn plot_rows_ascend_by_scale() {
        let recs = vec![
            rec("ea", 64, 500, true),
            rec("fea", 8, 50, false),
            rec("ea", 8, 40, true),
            rec("ea", 16, 90, true),
        ];
        let mut buf = Vec::new();
        plot_data(
            &summarize(&recs, Grouping::Scale),
            &PlotMetric::ALL,
            &mut buf,
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        let scales: Vec<usize> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
            .collect();
        assert!(scales.windows(2).all(|w| w[0] <= w[1]));
        // fea at 8 has no mean (no success) but an infinite ERT.
        assert!(text.contains("fea,onemax,8,ert,inf"));
        assert!(!text.contains("fea,onemax,8,mean"));
        assert!(text.contains("fea,onemax,8,success,0"));
    }

    #[test]
    fn tables() {
        let recs = vec![
            rec("ea", 9, 100, true),
            rec("fea", 9, 100, true),
            rec("ea", 16, 100, true),
            rec("fea", 16, 100, false),
        ];
        let s = slowdown_table(&recs, "fea", "ea");
        assert_eq!(s.len(), 2);
        assert!((s[0].ratio.unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(s[1].ratio, None);
        let t = exponent_table(&recs);
        assert_eq!(t.len(), 2);
        assert!(t[0].t.is_some());
        assert_eq!(t[1].t, None);
    }
}
