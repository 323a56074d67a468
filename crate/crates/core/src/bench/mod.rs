//! Benchmark driver: timed runs, worker sweeps and report output.

mod report;

pub use report::{compute_metrics, emit, sig6, sweep_csv, Format, Metrics, RunReport, SweepRow};

use std::time::Instant;

use crate::error::{Error, Result};
use crate::runtime::{PoolOptions, WorkerPool};
use crate::sim::{Exchange, Local, RunConfig, Simulation};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub run: RunConfig,
    pub pool: PoolOptions,
    pub watts: f64,
}

impl BenchConfig {
    pub fn new(run: RunConfig) -> Self {
        BenchConfig { run, pool: PoolOptions::new(1), watts: 120.0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.run.validate()?;
        if !(self.watts >= 0.0 && self.watts.is_finite()) {
            return Err(Error::config(format!("watts must be a finite non-negative number, got {}", self.watts)));
        }
        Ok(())
    }
}

/// Warm up with one untimed step, then time `steps` steps of `sim`.
/// The report covers the locally owned leaves only.
pub fn timed_steps(
    cfg: &BenchConfig,
    sim: &mut Simulation,
    pool: &WorkerPool,
    ex: &mut dyn Exchange,
) -> Result<RunReport> {
    let steps = cfg.run.steps;
    sim.step(pool, ex)?;
    let t = Instant::now();
    for _ in 0..steps {
        sim.step(pool, ex)?;
    }
    let wall_seconds = t.elapsed().as_secs_f64().max(f64::MIN_POSITIVE);
    let kernels = sim.kernels();
    Ok(RunReport {
        scenario: cfg.run.scenario.name.to_string(),
        max_level: cfg.run.max_level,
        steps,
        workers: pool.worker_count(),
        nranks: 1,
        simd: kernels.name.to_string(),
        width: kernels.width,
        leaves: sim.owned().len() as u64,
        cells: 0,
        wall_seconds,
        flops: sim.flop_estimate(steps),
        watts_nominal: cfg.watts,
        subgrids_per_sec: 0.0,
        gflops: 0.0,
        energy_wh: 0.0,
        energy_paper_wmin: 0.0,
    }
    .finish())
}

/// Single-process run. Returns the report and the final simulation state.
pub fn run(cfg: &BenchConfig) -> Result<(RunReport, Simulation)> {
    cfg.validate()?;
    let pool = WorkerPool::with_options(cfg.pool)?;
    let mut sim = Simulation::new(&cfg.run)?;
    let report = timed_steps(cfg, &mut sim, &pool, &mut Local)?;
    Ok((report, sim))
}

/// Worker counts to sweep over, with repetitions per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSpec {
    pub cores: Vec<usize>,
    pub repetitions: usize,
}

impl SweepSpec {
    pub fn new(cores: Vec<usize>) -> Self {
        SweepSpec { cores, repetitions: 3 }
    }

    pub fn parse(list: &str) -> Result<Self> {
        let cores = list
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::config(format!("bad core count {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let spec = SweepSpec::new(cores);
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cores.is_empty() {
            return Err(Error::config("sweep needs at least one core count"));
        }
        if self.cores[0] == 0 || self.cores.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(format!("sweep core counts must be positive and strictly increasing: {:?}", self.cores)));
        }
        if self.repetitions == 0 {
            return Err(Error::config("sweep needs at least one repetition"));
        }
        Ok(())
    }
}

/// Median of the repetitions' wall times per worker count.
pub fn sweep(spec: &SweepSpec, cfg: &BenchConfig) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    cfg.validate()?;
    let mut rows = Vec::with_capacity(spec.cores.len());
    for &cores in &spec.cores {
        let point = || -> Result<f64> {
            let mut c = cfg.clone();
            c.pool.workers = cores;
            let mut times = (0..spec.repetitions).map(|_| run(&c).map(|(r, _)| r.wall_seconds)).collect::<Result<Vec<_>>>()?;
            Ok(median(&mut times))
        };
        let seconds = point().map_err(|e| Error::SweepPoint { cores, source: Box::new(e) })?;
        rows.push(SweepRow { cores, seconds });
    }
    Ok(rows)
}

/// Median; the mean of the middle pair for even lengths.
pub fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}
