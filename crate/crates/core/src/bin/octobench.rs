//! `octobench`: run a scenario and report throughput, flop rate and energy.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use lanepack::SimdChoice;
use octolite::bench::{self, BenchConfig, Format, SweepSpec};
use octolite::dist::{config_hash, RankConfig, Session};
use octolite::mesh::{Scenario, ScenarioName, Tree};
use octolite::physics::Kernels;
use octolite::runtime::{PoolOptions, WorkerPool};
use octolite::{Error, Result, RunConfig, Simulation};

#[derive(Parser, Debug)]
#[command(name = "octobench", version, about = "AMR octree hydro + gravity benchmark")]
struct Cli {
    /// Benchmark problem.
    #[arg(long, default_value = "sod")]
    scenario: ScenarioName,
    /// Scenario definition (JSON); replaces the built-in preset.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    max_level: u8,
    /// Timed steps (default: the scenario's own step count).
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Allow more workers than available cores.
    #[arg(long)]
    oversubscribe: bool,
    /// Pin workers to cores.
    #[arg(long)]
    pin: bool,
    /// scalar, w2, w4, w8 or native.
    #[arg(long, default_value = "native")]
    simd: String,
    #[arg(long, default_value_t = 0.4)]
    cfl: f64,
    /// Nominal node power for the energy figures.
    #[arg(long, default_value_t = 120.0)]
    watts: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    rank: usize,
    #[arg(long, default_value_t = 1)]
    nranks: usize,
    /// host:port of every rank, comma separated, in rank order.
    #[arg(long, value_delimiter = ',')]
    peers: Vec<String>,
    #[arg(long, default_value_t = 30)]
    net_timeout_secs: u64,
    /// Comma-separated worker counts; emits a `cores,seconds` table.
    #[arg(long)]
    sweep: Option<String>,
    /// Report destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the final state here (`PATH.rank<k>` per rank when distributed).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut msg = format!("octobench: {e}");
            let mut src = std::error::Error::source(&e);
            while let Some(s) = src {
                msg.push_str(&format!(": {s}"));
                src = s.source();
            }
            eprintln!("{msg}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn bench_config(cli: &Cli) -> Result<BenchConfig> {
    let scenario = match &cli.config {
        Some(p) => Scenario::from_json(&std::fs::read_to_string(p).map_err(|e| Error::config(format!("{}: {e}", p.display())))?)?,
        None => Scenario::preset(cli.scenario),
    };
    let mut run = RunConfig::new(scenario, cli.max_level);
    if let Some(s) = cli.steps {
        run.steps = s;
    }
    run.cfl = cli.cfl;
    run.seed = cli.seed;
    run.simd = cli.simd.parse::<SimdChoice>()?;
    let cfg = BenchConfig {
        run,
        pool: PoolOptions { workers: cli.workers, pin: cli.pin, oversubscribe: cli.oversubscribe },
        watts: cli.watts,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn write_out(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn shard_path(p: &Path, rank: usize) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(format!(".rank{rank}"));
    PathBuf::from(s)
}

fn run(cli: Cli) -> Result<()> {
    let format: Format = cli.format.parse()?;
    let cfg = bench_config(&cli)?;

    if let Some(list) = &cli.sweep {
        if cli.nranks != 1 {
            return Err(Error::config("--sweep runs on a single rank"));
        }
        let rows = bench::sweep(&SweepSpec::parse(list)?, &cfg)?;
        let text = match format {
            Format::Csv => bench::sweep_csv(&rows),
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        };
        return write_out(&cli, &text);
    }

    if cli.nranks == 1 {
        let (report, sim) = bench::run(&cfg)?;
        if let Some(p) = &cli.checkpoint {
            sim.checkpoint().write(p)?;
        }
        eprintln!(
            "{} L{}: {} leaves, {} steps in {:.3} s, {:.4e} sub-grid cells/s, {:.3} GFLOP/s",
            report.scenario, report.max_level, report.leaves, report.steps, report.wall_seconds, report.subgrids_per_sec, report.gflops
        );
        return write_out(&cli, &bench::emit(&report, format)?);
    }

    let rank_cfg = RankConfig {
        rank: cli.rank,
        nranks: cli.nranks,
        peers: cli.peers.clone(),
        timeout: Duration::from_secs(cli.net_timeout_secs),
    };
    let mut session = Session::connect(&rank_cfg, config_hash(&cfg.run, cli.nranks)?)?;
    let tree = Tree::build(&cfg.run.scenario, cfg.run.max_level, cfg.run.seed)?;
    let ranges = tree.partition(cli.nranks);
    let mut sim = Simulation::from_tree(tree, Kernels::for_choice(cfg.run.simd), cfg.run.cfl, ranges[cli.rank].clone())?;
    session.attach(sim.tree(), sim.plan(), ranges)?;
    let pool = WorkerPool::with_options(cfg.pool)?;
    let mut local = bench::timed_steps(&cfg, &mut sim, &pool, &mut session)?;
    local.nranks = cli.nranks;
    if let Some(p) = &cli.checkpoint {
        sim.checkpoint().write(&shard_path(p, cli.rank))?;
    }
    let merged = session.gather_report(&local)?;
    let traffic = session.traffic();
    let faces = session.faces_per_stage();
    session.finish()?;
    eprintln!(
        "rank {}: {} leaves, {} FACE messages per stage, {} sent in total",
        cli.rank, local.leaves, faces, traffic.faces_sent
    );
    if let Some(report) = merged {
        write_out(&cli, &bench::emit(&report, format)?)?;
    }
    Ok(())
}
