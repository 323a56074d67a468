use std::process::Command;

use lanepack::SimdChoice;
use octolite::bench::{self, compute_metrics, emit, median, sweep_csv, BenchConfig, Format, RunReport, SweepRow, SweepSpec};
use octolite::mesh::{Checkpoint, Scenario, ScenarioName};
use octolite::{Error, RunConfig};

// Printed values from the original study: the GFLOP/s axis labels (per-step
// flops from its problem-size table), the single-node energy bar, and the
// level-5 cell count.
#[test]
fn metric_anchors() {
    let m = compute_metrics(1, 20, 172.159, 5.28e11 * 20.0, 0.0);
    assert!((m.gflops - 61.33).abs() <= 0.01, "{}", m.gflops);
    let m = compute_metrics(1, 10, 23724.2, 1.11e12 * 10.0, 0.0);
    assert!((m.gflops - 0.47).abs() <= 0.01, "{}", m.gflops);
    let m = compute_metrics(1, 1, 172.159, 0.0, 120.0);
    assert!((m.energy_paper_wmin - 344.3).abs() <= 0.1, "{}", m.energy_paper_wmin);
    assert!((m.energy_wh - 120.0 * 172.159 / 3600.0).abs() < 1e-12);
    let r = RunReport { leaves: 5048, ..report() }.finish();
    assert_eq!(r.cells, 2_584_576);
}

#[test]
fn throughput_formula() {
    // leaves × 512 cells × steps / seconds, evaluated by hand.
    let m = compute_metrics(2220, 20, 172.159, 0.0, 0.0);
    let want = 2220.0 * 512.0 * 20.0 / 172.159;
    assert!((m.subgrids_per_sec - want).abs() < 1e-9 * want);
    assert!((m.subgrids_per_sec - 132_045.38).abs() < 0.01);
    assert_eq!(m, compute_metrics(2220, 20, 172.159, 0.0, 0.0));
}

fn report() -> RunReport {
    RunReport {
        scenario: "sphere".into(),
        max_level: 3,
        steps: 10,
        workers: 2,
        nranks: 1,
        simd: "wide".into(),
        width: 4,
        leaves: 1072,
        cells: 0,
        wall_seconds: 12.345678901234567,
        flops: 123_456_789_012_345,
        watts_nominal: 120.0,
        subgrids_per_sec: 0.0,
        gflops: 0.0,
        energy_wh: 0.0,
        energy_paper_wmin: 0.0,
    }
    .finish()
}

#[test]
fn json_round_trips_field_for_field() {
    let r = report();
    let text = r.to_json().unwrap();
    assert_eq!(RunReport::from_json(&text).unwrap(), r);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(|s| s.as_str()).collect();
    assert!(keys.contains(&"gflops") && keys.contains(&"energy_paper_wmin") && keys.contains(&"subgrids_per_sec"));
    assert!(matches!(RunReport::from_json("{"), Err(Error::Json(_))));
}

#[test]
fn csv_output_is_a_plain_table() {
    let one = emit(&report(), Format::Csv).unwrap();
    assert_eq!(one.lines().count(), 2);
    let csv = sweep_csv(&[SweepRow { cores: 1, seconds: 2.5 }, SweepRow { cores: 2, seconds: 1.25 }, SweepRow { cores: 4, seconds: 0.7 }]);
    // Loads as-is: a header and numeric columns.
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("cores,seconds"));
    let rows: Vec<(usize, f64)> = lines
        .map(|l| {
            let (c, s) = l.split_once(',').unwrap();
            (c.parse().unwrap(), s.parse().unwrap())
        })
        .collect();
    assert_eq!(rows, vec![(1, 2.5), (2, 1.25), (4, 0.7)]);
    assert_eq!("csv".parse::<Format>().unwrap(), Format::Csv);
    assert!(matches!("xml".parse::<Format>(), Err(Error::Config(_))));
}

#[test]
fn sweep_spec_guards() {
    assert_eq!(SweepSpec::parse("1, 2,4").unwrap().cores, vec![1, 2, 4]);
    for bad in ["", "0", "2,1", "1,1", "1,x"] {
        assert!(matches!(SweepSpec::parse(bad), Err(Error::Config(_))), "{bad:?}");
    }
    assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
    assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
}

fn small(name: ScenarioName, level: u8, steps: u64) -> BenchConfig {
    BenchConfig::new(RunConfig { steps, ..RunConfig::new(Scenario::preset(name), level) })
}

#[test]
fn zero_steps_is_rejected() {
    let Err(e) = bench::run(&small(ScenarioName::Sod, 1, 0)) else { panic!("accepted zero steps") };
    assert!(matches!(&e, Error::Config(m) if m.contains("steps must be ≥ 1")), "{e}");
}

#[test]
fn width_changes_only_the_timing() {
    let mut a = small(ScenarioName::Sphere, 2, 1);
    a.run.simd = SimdChoice::Scalar;
    let mut b = a.clone();
    b.run.simd = SimdChoice::W4;
    let (ra, sa) = bench::run(&a).unwrap();
    let (rb, sb) = bench::run(&b).unwrap();
    assert_eq!((ra.leaves, ra.cells, ra.flops), (rb.leaves, rb.cells, rb.flops));
    assert_eq!((ra.width, rb.width), (1, 4));
    assert_eq!(sa.checkpoint(), sb.checkpoint());
    assert!(ra.wall_seconds > 0.0 && ra.gflops > 0.0);
}

#[test]
fn sweep_rows_follow_the_spec() {
    let mut cfg = small(ScenarioName::Sod, 1, 1);
    cfg.pool.oversubscribe = true;
    let spec = SweepSpec { cores: vec![1, 2, 4], repetitions: 1 };
    let scalar = bench::sweep(&spec, &cfg).unwrap();
    cfg.run.simd = SimdChoice::W4;
    let wide = bench::sweep(&spec, &cfg).unwrap();
    let cores = |rows: &[SweepRow]| rows.iter().map(|r| r.cores).collect::<Vec<_>>();
    assert_eq!(cores(&scalar), spec.cores);
    assert_eq!(cores(&scalar), cores(&wide));
    assert!(scalar.iter().all(|r| r.seconds > 0.0));
    let one = bench::sweep(&SweepSpec { cores: vec![1], repetitions: 1 }, &cfg).unwrap();
    assert_eq!(sweep_csv(&one).lines().count(), 2);
}

#[test]
fn failing_sweep_point_names_its_core_count() {
    let cfg = small(ScenarioName::Sod, 1, 1);
    let cores = octolite::runtime::available_cores();
    let e = bench::sweep(&SweepSpec { cores: vec![cores, cores + 1], repetitions: 1 }, &cfg).unwrap_err();
    assert!(matches!(&e, Error::SweepPoint { cores: c, .. } if *c == cores + 1), "{e}");
    assert_eq!(e.exit_code(), 1);
}

fn octobench(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_octobench")).args(args).output().unwrap()
}

#[test]
fn cli_json_report_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("state.bin");
    let out = octobench(&["--scenario", "sod", "--max-level", "1", "--steps", "2", "--simd", "scalar", "--checkpoint", ck.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!((r.scenario.as_str(), r.max_level, r.steps, r.width), ("sod", 1, 2, 1));
    assert_eq!(r.cells, r.leaves * 512);
    // The checkpoint holds the state after the warm-up and the timed steps.
    let cfg = RunConfig { steps: 3, simd: SimdChoice::Scalar, ..RunConfig::new(Scenario::preset(ScenarioName::Sod), 1) };
    let mut sim = octolite::Simulation::new(&cfg).unwrap();
    let pool = octolite::runtime::WorkerPool::new(1).unwrap();
    for _ in 0..3 {
        sim.step(&pool, &mut octolite::Local).unwrap();
    }
    assert_eq!(Checkpoint::read(&ck).unwrap(), sim.checkpoint());
}

#[test]
fn cli_csv_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = octobench(&["--max-level", "1", "--steps", "1", "--sweep", "1", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("cores,seconds\n1,"));
    let out = octobench(&["--max-level", "1", "--steps", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2);
}

#[test]
fn cli_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tube.json");
    let s = Scenario { refine_threshold: 0.0, ..Scenario::preset(ScenarioName::Sod) };
    std::fs::write(&path, serde_json::to_string(&s).unwrap()).unwrap();
    let out = octobench(&["--config", path.to_str().unwrap(), "--max-level", "1", "--steps", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(RunReport::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap().leaves, 8);
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(octobench(&["--config", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn cli_exit_codes() {
    assert_eq!(octobench(&["--help"]).status.code(), Some(0));
    for args in [
        &["--steps", "0"][..],
        &["--bogus"],
        &["--simd", "w3"],
        &["--scenario", "torus"],
        &["--format", "xml"],
        &["--cfl", "2"],
        &["--workers", "0"],
        &["--sweep", "2,1"],
        &["--nranks", "2", "--rank", "5", "--peers", "a:1,b:2"],
        &["--nranks", "2", "--peers", "127.0.0.1:1"],
    ] {
        let out = octobench(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    // Nobody listening on the peer port: a communication failure.
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let peers = format!("127.0.0.1:{},127.0.0.1:{port}", port.wrapping_add(1));
    let out = octobench(&["--max-level", "1", "--nranks", "2", "--rank", "1", "--peers", &peers, "--net-timeout-secs", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
