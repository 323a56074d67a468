use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mesh::subgrid::CELLS;

/// Derived throughput and energy figures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// `leaves × 512 × steps / s`; despite the name this counts cells.
    pub subgrids_per_sec: f64,
    pub gflops: f64,
    pub energy_wh: f64,
    /// `W × s / 60`, the figure printed as "Wh" in the original energy plots.
    pub energy_paper_wmin: f64,
}

/// `wall_seconds` must be positive.
pub fn compute_metrics(leaves: u64, steps: u64, wall_seconds: f64, flops: f64, watts: f64) -> Metrics {
    debug_assert!(wall_seconds > 0.0);
    Metrics {
        subgrids_per_sec: leaves as f64 * CELLS as f64 * steps as f64 / wall_seconds,
        gflops: flops / wall_seconds / 1e9,
        energy_wh: watts * wall_seconds / 3600.0,
        energy_paper_wmin: watts * wall_seconds / 60.0,
    }
}

/// One benchmark run. Field order is the JSON key order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: String,
    pub max_level: u8,
    pub steps: u64,
    pub workers: usize,
    pub nranks: usize,
    pub simd: String,
    pub width: usize,
    pub leaves: u64,
    pub cells: u64,
    pub wall_seconds: f64,
    pub flops: u64,
    pub watts_nominal: f64,
    pub subgrids_per_sec: f64,
    pub gflops: f64,
    pub energy_wh: f64,
    pub energy_paper_wmin: f64,
}

impl RunReport {
    /// Fill in cells and the derived metrics from the raw fields.
    pub fn finish(mut self) -> Self {
        self.cells = self.leaves * CELLS as u64;
        let m = compute_metrics(self.leaves, self.steps, self.wall_seconds, self.flops as f64, self.watts_nominal);
        self.subgrids_per_sec = m.subgrids_per_sec;
        self.gflops = m.gflops;
        self.energy_wh = m.energy_wh;
        self.energy_paper_wmin = m.energy_paper_wmin;
        self
    }

    /// Combine per-rank reports: counts add, time is the slowest rank, and
    /// every rank contributes one node's nominal power.
    pub fn merge(parts: &[RunReport]) -> Option<RunReport> {
        let first = parts.first()?;
        let mut out = first.clone();
        out.nranks = parts.len();
        out.leaves = parts.iter().map(|r| r.leaves).sum();
        out.flops = parts.iter().map(|r| r.flops).sum();
        out.wall_seconds = parts.iter().map(|r| r.wall_seconds).fold(0.0, f64::max);
        out.watts_nominal = parts.iter().map(|r| r.watts_nominal).sum();
        Some(out.finish())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(crate::Error::config(format!("unknown format {s:?} (csv|json)"))),
        }
    }
}

/// One sweep point: worker count and median wall time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub cores: usize,
    pub seconds: f64,
}

/// `cores,seconds` table, seconds to six significant digits.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("cores,seconds\n");
    for r in rows {
        out.push_str(&format!("{},{}\n", r.cores, sig6(r.seconds)));
    }
    out
}

/// Render a single run in the requested format; CSV is a one-row table.
pub fn emit(report: &RunReport, format: Format) -> Result<String> {
    match format {
        Format::Json => report.to_json(),
        Format::Csv => Ok(sweep_csv(&[SweepRow { cores: report.workers, seconds: report.wall_seconds }])),
    }
}

/// Six significant digits: plain notation for 1e-5 ≤ |x| < 1e6, otherwise
/// scientific.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..6).contains(&exp) {
        format!("{x:.*}", (5 - exp) as usize)
    } else {
        sci
    }
}
