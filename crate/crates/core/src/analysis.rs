//! Coupling metrics, full-circuit closed forms and the sweep runner.
//!
//! The coupling ratio counts every non-terminal gate acting on two or more
//! qubits (ternary and multi-controlled gates included) against the number
//! of distinct qubit pairs.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::Circuit;
use crate::generators::{Family, GeneratorError, Seed};
use crate::partition::{spatial_cut, Heuristic, PartitionError, PartitionOptions};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("coupling metrics need at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("closed forms start at n = 4, got n_max = {0}")]
    RangeTooSmall(usize),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Number of distinct qubit pairs, `n(n-1)/2`.
pub fn coupling_base(n: usize) -> Result<u64, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::TooFewQubits(n));
    }
    Ok((n as u64) * (n as u64 - 1) / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingMetrics {
    pub n: usize,
    pub cb: u64,
    pub multiqubit_gate_count: usize,
    pub cr: f64,
}

pub fn coupling_ratio(c: &Circuit) -> Result<CouplingMetrics, AnalysisError> {
    let n = c.width();
    let cb = coupling_base(n)?;
    let multi = c.gates().iter().filter(|g| g.is_multiqubit()).count();
    Ok(CouplingMetrics {
        n,
        cb,
        multiqubit_gate_count: multi,
        cr: multi as f64 / cb as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub n: usize,
    pub cb: u64,
    pub midcut_ebits: u64,
}

/// Coupling base and balanced-bisection cut of the full circuit, n = 4..=n_max.
pub fn full_circuit_closed_forms(n_max: usize) -> Result<Vec<ClosedForm>, AnalysisError> {
    if n_max < 4 {
        return Err(AnalysisError::RangeTooSmall(n_max));
    }
    Ok((4..=n_max)
        .map(|n| {
            let n64 = n as u64;
            ClosedForm {
                n,
                cb: n64 * (n64 - 1) / 2,
                midcut_ebits: n64.div_ceil(2) * (n64 / 2),
            }
        })
        .collect())
}

/// Default widths for reduction curves.
pub const DEFAULT_N_LIST: [usize; 10] = [4, 8, 12, 16, 24, 32, 48, 64, 96, 120];

fn default_restarts() -> usize {
    10
}

fn default_true() -> bool {
    true
}

fn default_n_list() -> Vec<usize> {
    DEFAULT_N_LIST.to_vec()
}

/// Sweep description, as read from a JSON config file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub families: Vec<Family>,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    pub seeds: Vec<u64>,
    pub heuristics: Vec<Heuristic>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_true")]
    pub include_midcut_start: bool,
    /// Record wall time per row. Off by default so output is reproducible.
    #[serde(default)]
    pub timing: bool,
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<SweepConfig, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub heuristic: Heuristic,
    pub midcut: Option<usize>,
    pub mincut: Option<usize>,
    pub reduction_pct: Option<f64>,
    pub cb: Option<u64>,
    pub cr: Option<f64>,
    pub wall_time_ms: Option<f64>,
    pub error: Option<String>,
}

fn run_row(
    family: Family,
    n: usize,
    seed: u64,
    heuristic: Heuristic,
    config: &SweepConfig,
) -> SweepRow {
    let mut row = SweepRow {
        family,
        n,
        seed,
        heuristic,
        midcut: None,
        mincut: None,
        reduction_pct: None,
        cb: None,
        cr: None,
        wall_time_ms: None,
        error: None,
    };
    let started = Instant::now();
    let outcome = (|| -> Result<_, AnalysisError> {
        let circuit = family.generate(n, Seed(seed))?;
        let opts = PartitionOptions {
            seed: Seed(seed),
            restarts: config.restarts,
            include_midcut_start: config.include_midcut_start,
            epsilon: 0.0,
        };
        let report = spatial_cut(&circuit, heuristic, &opts)?;
        let metrics = coupling_ratio(&circuit)?;
        Ok((report, metrics))
    })();
    match outcome {
        Ok((report, metrics)) => {
            row.midcut = Some(report.baseline_cut);
            row.mincut = Some(report.cut_count);
            row.reduction_pct = Some(report.reduction_pct);
            row.cb = Some(metrics.cb);
            row.cr = Some(metrics.cr);
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    if config.timing {
        row.wall_time_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    row
}

/// Run every (family, n, seed, heuristic) combination, in that nesting
/// order. Rows run in parallel; output order follows the config. Failures
/// are recorded on their row and never abort the sweep.
pub fn run_sweep(config: &SweepConfig) -> Vec<SweepRow> {
    let mut tasks = Vec::new();
    for &family in &config.families {
        for &n in &config.n_list {
            for &seed in &config.seeds {
                for &heuristic in &config.heuristics {
                    tasks.push((family, n, seed, heuristic));
                }
            }
        }
    }
    tasks
        .into_par_iter()
        .map(|(f, n, s, h)| run_row(f, n, s, h, config))
        .collect()
}

pub const CSV_HEADER: [&str; 11] = [
    "family",
    "n",
    "seed",
    "heuristic",
    "midcut",
    "mincut",
    "reduction_pct",
    "cb",
    "cr",
    "wall_time_ms",
    "error",
];

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], sink: W) -> Result<(), AnalysisError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.family.name().to_string(),
            r.n.to_string(),
            r.seed.to_string(),
            r.heuristic.to_string(),
            opt(r.midcut, |v| v.to_string()),
            opt(r.mincut, |v| v.to_string()),
            opt(r.reduction_pct, |v| format!("{v:.4}")),
            opt(r.cb, |v| v.to_string()),
            opt(r.cr, |v| format!("{v:.6}")),
            opt(r.wall_time_ms, |v| format!("{v:.3}")),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(rows: &[SweepRow]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn to_json_string(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("plain data")
}

/// Median reduction over seeds for one (family, heuristic, n).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: Family,
    pub heuristic: Heuristic,
    pub n: usize,
    pub median_reduction_pct: f64,
    pub rows: usize,
}

pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(|a, b| a.total_cmp(b));
    let mid = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    })
}

/// Per-(family, heuristic, n) medians, ordered by first appearance of the
/// (family, heuristic) pair and then by n.
pub fn summarize(rows: &[SweepRow]) -> Vec<SummaryRow> {
    let mut order: Vec<(Family, Heuristic)> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for r in rows {
        let key = (r.family, r.heuristic);
        let gi = match order.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                order.push(key);
                order.len() - 1
            }
        };
        if let Some(v) = r.reduction_pct {
            groups.entry((gi, r.n)).or_default().push(v);
        }
    }
    groups
        .into_iter()
        .map(|((gi, n), mut vals)| SummaryRow {
            family: order[gi].0,
            heuristic: order[gi].1,
            n,
            rows: vals.len(),
            median_reduction_pct: median(&mut vals).expect("group is non-empty"),
        })
        .collect()
}

/// Direction of the median curve between its smallest and largest n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Decreasing,
    Flat,
    Increasing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub family: Family,
    pub heuristic: Heuristic,
    pub first_n: usize,
    pub first_median: f64,
    pub last_n: usize,
    pub last_median: f64,
    pub trend: Trend,
}

pub fn trends(summary: &[SummaryRow]) -> Vec<TrendCheck> {
    let mut out: Vec<TrendCheck> = Vec::new();
    for s in summary {
        match out
            .iter_mut()
            .find(|t| t.family == s.family && t.heuristic == s.heuristic)
        {
            Some(t) => {
                t.last_n = s.n;
                t.last_median = s.median_reduction_pct;
            }
            None => out.push(TrendCheck {
                family: s.family,
                heuristic: s.heuristic,
                first_n: s.n,
                first_median: s.median_reduction_pct,
                last_n: s.n,
                last_median: s.median_reduction_pct,
                trend: Trend::Flat,
            }),
        }
    }
    for t in &mut out {
        t.trend = if t.first_median > t.last_median {
            Trend::Decreasing
        } else if t.first_median < t.last_median {
            Trend::Increasing
        } else {
            Trend::Flat
        };
    }
    out
}

/// Summary table followed by one `# trend` footer line per curve.
pub fn summary_text(summary: &[SummaryRow]) -> String {
    let mut out = String::from("family,heuristic,n,median_reduction_pct,rows\n");
    for s in summary {
        let _ = writeln!(
            out,
            "{},{},{},{:.4},{}",
            s.family, s.heuristic, s.n, s.median_reduction_pct, s.rows
        );
    }
    for t in trends(summary) {
        let _ = writeln!(
            out,
            "# trend {} {}: n={} median {:.4} -> n={} median {:.4}: {}",
            t.family,
            t.heuristic,
            t.first_n,
            t.first_median,
            t.last_n,
            t.last_median,
            match t.trend {
                Trend::Decreasing => "decreasing",
                Trend::Flat => "flat",
                Trend::Increasing => "increasing",
            }
        );
    }
    out
}

/// Static line plot of median reduction against n, one polyline per curve.
pub fn summary_svg(summary: &[SummaryRow]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const PAD: f64 = 50.0;
    const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];

    let n_max = summary.iter().map(|s| s.n).max().unwrap_or(1).max(1) as f64;
    let n_min = summary.iter().map(|s| s.n).min().unwrap_or(0) as f64;
    let y_max = summary
        .iter()
        .map(|s| s.median_reduction_pct)
        .fold(10.0f64, f64::max)
        .ceil();
    let span = (n_max - n_min).max(1.0);
    let x = |n: usize| PAD + (n as f64 - n_min) / span * (W - 2.0 * PAD);
    let y = |v: f64| H - PAD - v.max(0.0) / y_max * (H - 2.0 * PAD);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(
        out,
        r#"<text x="{cx}" y="{ty}" text-anchor="middle" font-size="12">qubits (n)</text><text x="14" y="{cy}" font-size="12" transform="rotate(-90 14 {cy})" text-anchor="middle">median reduction (%)</text>"#,
        cx = W / 2.0,
        ty = H - 12.0,
        cy = H / 2.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{x0}" y="{ty}" font-size="10" text-anchor="middle">{n_min}</text><text x="{x1}" y="{ty}" font-size="10" text-anchor="middle">{n_max}</text><text x="{lx}" y="{yt}" font-size="10" text-anchor="end">{y_max}</text><text x="{lx}" y="{yb}" font-size="10" text-anchor="end">0</text>"#,
        x0 = PAD,
        x1 = W - PAD,
        ty = H - PAD + 14.0,
        lx = PAD - 4.0,
        yt = PAD + 4.0,
        yb = H - PAD + 4.0
    );

    let mut curves: Vec<((Family, Heuristic), Vec<&SummaryRow>)> = Vec::new();
    for s in summary {
        let key = (s.family, s.heuristic);
        match curves.iter_mut().find(|(k, _)| *k == key) {
            Some((_, pts)) => pts.push(s),
            None => curves.push((key, vec![s])),
        }
    }
    for (i, ((family, heuristic), pts)) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let points: Vec<String> = pts
            .iter()
            .map(|s| format!("{:.1},{:.1}", x(s.n), y(s.median_reduction_pct)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            points.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{lx}" y="{ly}" font-size="11" fill="{color}">{family} / {heuristic}</text>"#,
            lx = W - PAD - 150.0,
            ly = PAD + 14.0 * (i as f64 + 1.0)
        );
    }
    out.push_str("</svg>\n");
    out
}
