//! Wire format and multi-rank sessions over localhost TCP, each rank on its
//! own thread.

use std::io::Write;
use std::net::{TcpListener, TcpStream};
use std::ops::Range;
use std::time::Duration;

#[path = "support/adjacency.rs"]
mod adjacency;

use adjacency::adjacency_messages;
use octolite::bench::RunReport;
use octolite::dist::{config_hash, MsgType, RankConfig, Session, WireMessage};
use octolite::mesh::ghost::{ghost_cell, FACE_CELLS};
use octolite::mesh::subgrid::{idx, NFIELDS};
use octolite::mesh::{fill_ghosts, Fields, GhostPlan, Key, Scenario, ScenarioName, Tree};
use octolite::physics::{Kernels, Stage};
use octolite::{Error, Exchange, RunConfig, Simulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [MsgType; 7] =
    [MsgType::Hello, MsgType::Face, MsgType::DtPropose, MsgType::DtResult, MsgType::Report, MsgType::Bye, MsgType::Mass];

fn random_message(rng: &mut ChaCha8Rng) -> WireMessage {
    let kind = KINDS[rng.gen_range(0..KINDS.len())];
    let mut key = Key::ROOT;
    for _ in 0..rng.gen_range(0..=7) {
        key = key.child(rng.gen_range(0..8));
    }
    let n = rng.gen_range(0..40);
    // Arbitrary bit patterns, NaNs and infinities included.
    let payload = (0..n).map(|_| f64::from_bits(rng.gen())).collect();
    if kind.has_address() {
        WireMessage::addressed(kind, rng.gen(), key, rng.gen_range(0..6), payload)
    } else {
        WireMessage::new(kind, rng.gen(), payload)
    }
}

#[test]
fn random_frames_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut stream = Vec::new();
    let mut sent = Vec::new();
    for _ in 0..2000 {
        let m = random_message(&mut rng);
        let bytes = m.encode();
        assert_eq!(bytes.len(), m.encoded_len());
        assert_eq!(WireMessage::decode(&bytes).unwrap(), m);
        // Any strict prefix is a protocol error, never a panic.
        let cut = rng.gen_range(1..bytes.len());
        assert!(matches!(WireMessage::decode(&bytes[..cut]), Err(Error::Protocol(_))));
        m.write_to(&mut stream).unwrap();
        sent.push(m);
    }
    let mut r = &stream[..];
    for m in &sent {
        assert_eq!(&WireMessage::read_from(&mut r).unwrap().unwrap(), m);
    }
    assert!(WireMessage::read_from(&mut r).unwrap().is_none());
}

fn free_addrs(n: usize) -> Vec<String> {
    let ls: Vec<TcpListener> = (0..n).map(|_| TcpListener::bind("127.0.0.1:0").unwrap()).collect();
    ls.iter().map(|l| l.local_addr().unwrap().to_string()).collect()
}

fn rank_cfg(rank: usize, peers: &[String]) -> RankConfig {
    RankConfig { rank, nranks: peers.len(), peers: peers.to_vec(), timeout: Duration::from_secs(20) }
}

/// Run `f` as every rank of an `n`-rank job; results in rank order.
fn on_ranks<T: Send>(n: usize, hash: impl Fn(usize) -> u64 + Sync, f: impl Fn(Session) -> octolite::Result<T> + Sync) -> Vec<octolite::Result<T>> {
    let peers = free_addrs(n);
    std::thread::scope(|s| {
        let hs: Vec<_> = (0..n)
            .map(|r| {
                let (peers, hash, f) = (&peers, &hash, &f);
                s.spawn(move || Session::connect(&rank_cfg(r, peers), hash(r)).and_then(f))
            })
            .collect();
        hs.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

#[test]
fn single_rank_session_is_trivial() {
    let mut s = Session::connect(&RankConfig::single(), 1).unwrap();
    assert_eq!((s.rank(), s.nranks()), (0, 1));
    assert_eq!(s.allreduce_min(0.7, 0).unwrap(), 0.7);
    let r = report(32, 10.0);
    assert_eq!(s.gather_report(&r).unwrap(), Some(r));
    s.finish().unwrap();
}

#[test]
fn two_ranks_agree_on_the_minimum() {
    let out = on_ranks(2, |_| 42, |mut s| {
        let x = if s.rank() == 0 { 0.3 } else { 0.2 };
        let m = s.allreduce_min(x, 0)?;
        s.finish()?;
        Ok(m)
    });
    for r in out {
        assert_eq!(r.unwrap(), 0.2);
    }
}

#[test]
fn differing_configurations_are_rejected_by_both_ranks() {
    let a = RunConfig::new(Scenario::preset(ScenarioName::Sod), 2);
    let mut b = a.clone();
    b.scenario.gamma = 1.3;
    let hashes = [config_hash(&a, 2).unwrap(), config_hash(&b, 2).unwrap()];
    assert_ne!(hashes[0], hashes[1]);
    assert_eq!(config_hash(&a, 2).unwrap(), hashes[0]);
    assert_ne!(config_hash(&a, 3).unwrap(), hashes[0]);
    for r in on_ranks(2, |r| hashes[r], |_| Ok(())) {
        let e = r.unwrap_err();
        assert!(matches!(e, Error::Config(_)), "{e}");
        assert_eq!(e.exit_code(), 1);
    }
}

#[test]
fn four_rank_allreduce_matches_scalar_min() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let vals: Vec<Vec<f64>> = (0..4).map(|_| (0..20).map(|_| rng.gen_range(1e-6..1.0)).collect()).collect();
    let out = on_ranks(4, |_| 7, |mut s| {
        let mut got = Vec::new();
        for step in 0..20u64 {
            got.push(s.allreduce_min(vals[s.rank()][step as usize], step)?);
        }
        s.finish()?;
        Ok(got)
    });
    let want: Vec<f64> = (0..20).map(|i| vals.iter().map(|v| v[i]).fold(f64::INFINITY, f64::min)).collect();
    for r in out {
        let got = r.unwrap();
        assert!(got.iter().zip(&want).all(|(a, b)| a.to_bits() == b.to_bits()));
    }
}

fn report(leaves: u64, secs: f64) -> RunReport {
    RunReport {
        scenario: "binary".into(),
        max_level: 2,
        steps: 10,
        workers: 1,
        nranks: 1,
        simd: "scalar".into(),
        width: 1,
        leaves,
        cells: 0,
        wall_seconds: secs,
        flops: leaves * 1000,
        watts_nominal: 120.0,
        subgrids_per_sec: 0.0,
        gflops: 0.0,
        energy_wh: 0.0,
        energy_paper_wmin: 0.0,
    }
    .finish()
}

#[test]
fn reports_merge_on_rank_zero() {
    let out = on_ranks(2, |_| 1, |mut s| {
        let local = if s.rank() == 0 { report(32, 10.0) } else { report(32, 11.0) };
        let merged = s.gather_report(&local)?;
        s.finish()?;
        Ok(merged)
    });
    let mut out = out.into_iter();
    let merged = out.next().unwrap().unwrap().unwrap();
    assert!(out.next().unwrap().unwrap().is_none());
    assert_eq!(merged.leaves, 64);
    assert_eq!(merged.cells, 64 * 512);
    assert_eq!(merged.wall_seconds, 11.0);
    assert_eq!(merged.nranks, 2);
    assert_eq!(merged.flops, 64_000);
    assert_eq!(merged.watts_nominal, 240.0);
}

#[test]
fn per_rank_flop_estimates_add_up_to_the_whole_tree() {
    let cfg = RunConfig::new(Scenario::preset(ScenarioName::Binary), 2);
    let tree = Tree::build(&cfg.scenario, 2, 0).unwrap();
    let kern = Kernels::for_choice(cfg.simd);
    let whole = Simulation::from_tree(tree.clone(), kern, 0.4, 0..tree.leaf_count()).unwrap().flop_estimate(10);
    for n in [2, 3] {
        let sum: u64 = tree
            .partition(n)
            .into_iter()
            .map(|r| Simulation::from_tree(tree.clone(), kern, 0.4, r).unwrap().flop_estimate(10))
            .sum();
        assert_eq!(sum, whole, "{n} ranks");
    }
}

fn randomized_tree(seed: u64) -> Tree {
    let mut tree = Tree::build(&Scenario::preset(ScenarioName::Binary), 3, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for g in tree.leaves_mut() {
        for v in g.data_mut() {
            *v = rng.gen_range(0.5..1.5);
        }
    }
    tree
}

fn ghost_bits(tree: &Tree, leaves: Range<usize>) -> Vec<u64> {
    let mut out = Vec::new();
    for g in &tree.leaves()[leaves] {
        for face in 0..6 {
            for slot in 0..FACE_CELLS {
                let [i, j, k] = ghost_cell(face, slot);
                out.extend((0..NFIELDS).map(|f| g.get(f, idx(i, j, k)).to_bits()));
            }
        }
    }
    out
}

#[test]
fn halo_exchange_reproduces_single_rank_ghosts() {
    let reference = {
        let mut t = randomized_tree(1);
        let plan = GhostPlan::build(&t).unwrap();
        fill_ghosts(&mut t, &plan, Fields::ALL);
        t
    };
    for n in [2, 3] {
        let ranges = reference.partition(n);
        let oracle = adjacency_messages(&reference, &ranges);
        let out = on_ranks(n, |_| 5, |mut s| {
            let mine = ranges[s.rank()].clone();
            let mut t = randomized_tree(1);
            // Remote interiors are unknown until the exchange fills them.
            for (i, g) in t.leaves_mut().iter_mut().enumerate() {
                if !mine.contains(&i) {
                    g.data_mut().fill(f64::NAN);
                }
            }
            let plan = GhostPlan::build(&t).unwrap();
            s.attach(&t, &plan, ranges.clone())?;
            s.halo(&mut t, 0, Stage::First)?;
            fill_ghosts(&mut t, &plan, Fields::ALL);
            let sent = (s.faces_per_stage(), s.traffic().faces_sent as usize, s.expected_faces_per_stage());
            s.finish()?;
            Ok((ghost_bits(&t, mine), sent))
        });
        let mut total_sent = 0;
        let mut total_expected = 0;
        for (r, res) in out.into_iter().enumerate() {
            let (bits, (per_stage, sent, expected)) = res.unwrap();
            assert_eq!(bits, ghost_bits(&reference, ranges[r].clone()), "rank {r} of {n}");
            assert_eq!(per_stage, oracle[r], "rank {r} of {n}");
            assert_eq!(sent, per_stage);
            total_sent += sent;
            total_expected += expected;
        }
        assert_eq!(total_sent, total_expected);
        assert!(total_sent > 0);
    }
}

#[test]
fn all_leaves_on_one_rank_sends_nothing() {
    let tree = Tree::build(&Scenario::preset(ScenarioName::Sod), 2, 0).unwrap();
    let n = tree.leaf_count();
    let out = on_ranks(2, |_| 3, |mut s| {
        let plan = GhostPlan::build(&tree).unwrap();
        s.attach(&tree, &plan, vec![0..n, n..n])?;
        let counts = (s.faces_per_stage(), s.expected_faces_per_stage());
        s.finish()?;
        Ok(counts)
    });
    for r in out {
        assert_eq!(r.unwrap(), (0, 0));
    }
}

#[test]
fn two_rank_steps_match_one_rank() {
    let cfg = RunConfig { steps: 2, ..RunConfig::new(Scenario::preset(ScenarioName::Binary), 2) };
    let pool = octolite::runtime::WorkerPool::new(1).unwrap();
    let mut single = Simulation::new(&cfg).unwrap();
    for _ in 0..cfg.steps {
        single.step(&pool, &mut octolite::Local).unwrap();
    }
    let hash = config_hash(&cfg, 2).unwrap();
    let out = on_ranks(2, |_| hash, |mut s| {
        let pool = octolite::runtime::WorkerPool::with_options(octolite::runtime::PoolOptions {
            workers: 1,
            pin: false,
            oversubscribe: true,
        })?;
        let tree = Tree::build(&cfg.scenario, cfg.max_level, cfg.seed)?;
        let ranges = tree.partition(2);
        let mut sim = Simulation::from_tree(tree, Kernels::for_choice(cfg.simd), cfg.cfl, ranges[s.rank()].clone())?;
        s.attach(sim.tree(), sim.plan(), ranges)?;
        for _ in 0..cfg.steps {
            sim.step(&pool, &mut s)?;
        }
        s.finish()?;
        Ok(sim.checkpoint())
    });
    let shards: Vec<_> = out.into_iter().map(|r| r.unwrap()).collect();
    let merged = octolite::mesh::Checkpoint::merge(shards);
    assert_eq!(merged.encode(), single.checkpoint().encode());
}

/// A hand-driven rank 1 that completes the handshake and then misbehaves.
fn rogue_peer(addr: String, hash: u64, act: impl FnOnce(&mut TcpStream) + Send + 'static) -> std::thread::JoinHandle<()> {
    std::thread::spawn(move || {
        let mut s = loop {
            match TcpStream::connect(&addr) {
                Ok(s) => break s,
                Err(_) => std::thread::sleep(Duration::from_millis(10)),
            }
        };
        WireMessage::new(MsgType::Hello, 0, vec![1.0, f64::from_bits(hash)]).write_to(&mut s).unwrap();
        let hello = WireMessage::read_from(&mut s).unwrap().unwrap();
        assert_eq!(hello.kind, MsgType::Hello);
        act(&mut s);
    })
}

fn rank0_against(act: impl FnOnce(&mut TcpStream) + Send + 'static, timeout: Duration) -> Error {
    let peers = free_addrs(2);
    let peer = rogue_peer(peers[0].clone(), 9, act);
    let cfg = RankConfig { timeout, ..rank_cfg(0, &peers) };
    let mut s = Session::connect(&cfg, 9).unwrap();
    let e = s.allreduce_min(1.0, 5).unwrap_err();
    drop(s);
    peer.join().unwrap();
    e
}

#[test]
fn stale_message_is_a_protocol_error() {
    let e = rank0_against(
        |s| {
            WireMessage::new(MsgType::DtPropose, 2, vec![0.5]).write_to(s).unwrap();
            s.flush().unwrap();
            let _ = WireMessage::read_from(s);
        },
        Duration::from_secs(20),
    );
    assert!(matches!(e, Error::Protocol(_)), "{e}");
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn silent_peer_times_out_naming_the_message() {
    let e = rank0_against(
        |s| {
            let _ = WireMessage::read_from(s);
        },
        Duration::from_millis(300),
    );
    assert!(matches!(&e, Error::Comm(m) if m.contains("step 5")), "{e}");
}

#[test]
fn vanished_peer_is_a_comm_error() {
    let e = rank0_against(|_| {}, Duration::from_secs(20));
    assert!(matches!(e, Error::Comm(_)), "{e}");
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn garbage_on_the_wire_is_a_protocol_error() {
    let e = rank0_against(
        |s| {
            s.write_all(b"NOPE0000000000000000000000").unwrap();
            let _ = WireMessage::read_from(s);
        },
        Duration::from_secs(20),
    );
    assert!(matches!(e, Error::Protocol(_)), "{e}");
}
