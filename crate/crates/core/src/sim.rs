//! Time stepping over a whole tree.
//!
//! One step: global dt → gravity (once, from the step-start densities) →
//! three RK stages, each `exchange halos → gather ghosts → apply + advance`.
//! Between phases there is a full barrier; within a phase every task writes
//! only its own leaf (or its own per-leaf buffer).

use std::ops::Range;

use lanepack::SimdChoice;

use crate::error::{Error, Result};
use crate::mesh::subgrid::{box_of_interior, CELLS, NFIELDS, RHO};
use crate::mesh::{Checkpoint, Fields, GhostBuf, GhostPlan, Scenario, SubGrid, Tree};
use crate::physics::gravity::{count_pairs, Sources, GRAVITY_STRIDE};
use crate::physics::{Kernels, KernelCostModel, Stage, StageInput, StepShape};
use crate::runtime::WorkerPool;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub max_level: u8,
    pub steps: u64,
    pub cfl: f64,
    pub simd: SimdChoice,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(scenario: Scenario, max_level: u8) -> Self {
        let steps = scenario.steps;
        RunConfig { scenario, max_level, steps, cfl: 0.4, simd: SimdChoice::Native, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        if self.steps < 1 {
            return Err(Error::config("steps must be ≥ 1"));
        }
        if !(self.cfl > 0.0 && self.cfl < 1.0) {
            return Err(Error::config(format!("cfl must lie in (0, 1), got {}", self.cfl)));
        }
        Ok(())
    }
}

/// Cross-rank communication hooks. The single-process implementation is
/// [`Local`].
pub trait Exchange {
    /// Refresh every remote cell the local ghost recipes read.
    fn halo(&mut self, tree: &mut Tree, step: u64, stage: Stage) -> Result<()>;
    /// Refresh remote densities before the gravity update.
    fn masses(&mut self, tree: &mut Tree, step: u64) -> Result<()>;
    /// Global minimum of the ranks' proposals.
    fn min_dt(&mut self, local: f64, step: u64) -> Result<f64>;
}

pub struct Local;

impl Exchange for Local {
    fn halo(&mut self, _: &mut Tree, _: u64, _: Stage) -> Result<()> {
        Ok(())
    }
    fn masses(&mut self, _: &mut Tree, _: u64) -> Result<()> {
        Ok(())
    }
    fn min_dt(&mut self, local: f64, _: u64) -> Result<f64> {
        Ok(local)
    }
}

pub struct Simulation {
    tree: Tree,
    plan: GhostPlan,
    kernels: Kernels,
    cfl: f64,
    owned: Range<usize>,
    u0: Vec<Vec<f64>>,
    bufs: Vec<GhostBuf>,
    gravity: Vec<Vec<f64>>,
    step: u64,
    time: f64,
    pairs: Option<u64>,
}

impl Simulation {
    /// All leaves owned locally.
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        let tree = Tree::build(&cfg.scenario, cfg.max_level, cfg.seed)?;
        let n = tree.leaf_count();
        Self::from_tree(tree, Kernels::for_choice(cfg.simd), cfg.cfl, 0..n)
    }

    /// Own `owned` (a range of leaf indices); the other leaves are shadow
    /// copies kept current by an [`Exchange`].
    pub fn from_tree(tree: Tree, kernels: Kernels, cfl: f64, owned: Range<usize>) -> Result<Self> {
        let plan = GhostPlan::build(&tree)?;
        let bufs = owned.clone().map(|i| plan.new_buf(i)).collect();
        let u0 = owned.clone().map(|_| vec![0.0; NFIELDS * CELLS]).collect();
        let gravity = if tree.scenario().gravity {
            owned.clone().map(|_| vec![0.0; GRAVITY_STRIDE]).collect()
        } else {
            Vec::new()
        };
        Ok(Simulation { tree, plan, kernels, cfl, owned, u0, bufs, gravity, step: 0, time: 0.0, pairs: None })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn tree_mut(&mut self) -> &mut Tree {
        &mut self.tree
    }

    pub fn plan(&self) -> &GhostPlan {
        &self.plan
    }

    pub fn owned(&self) -> Range<usize> {
        self.owned.clone()
    }

    pub fn kernels(&self) -> Kernels {
        self.kernels
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    /// Cached `[phi | gx | gy | gz]` of an owned leaf (after a gravity update).
    pub fn gravity_cache(&self, leaf: usize) -> Option<&[f64]> {
        self.gravity.get(leaf.checked_sub(self.owned.start)?).map(|v| &v[..])
    }

    pub fn checkpoint(&self) -> Checkpoint {
        Checkpoint::from_leaves(&self.tree.leaves()[self.owned.clone()])
    }

    /// Fill the ghost shells of owned leaves.
    pub fn fill_ghosts(&mut self, pool: &WorkerPool) -> Result<()> {
        self.gather(pool, Fields::ALL)?;
        let leaves = &mut self.tree.leaves_mut()[self.owned.clone()];
        let mut items: Vec<(&mut SubGrid, &GhostBuf)> = leaves.iter_mut().zip(&self.bufs).collect();
        pool.for_each_mut(&mut items, |_, (g, b)| {
            GhostPlan::apply(g, Fields::ALL, b);
            Ok(())
        })
    }

    fn gather(&mut self, pool: &WorkerPool, fields: Fields) -> Result<()> {
        let (plan, leaves, start) = (&self.plan, self.tree.leaves(), self.owned.start);
        pool.for_each_mut(&mut self.bufs, |i, b| {
            plan.gather(leaves, start + i, fields, b);
            Ok(())
        })
    }

    /// Recompute phi and g of owned leaves from current densities.
    pub fn update_gravity(&mut self, pool: &WorkerPool) -> Result<u64> {
        let src = Sources::from_leaves(self.tree.leaves());
        let (leaves, start, kernel) = (self.tree.leaves(), self.owned.start, self.kernels.gravity);
        let mut items: Vec<(&mut Vec<f64>, u64)> = self.gravity.iter_mut().map(|g| (g, 0)).collect();
        pool.for_each_mut(&mut items, |i, (out, pairs)| {
            *pairs = kernel(&leaves[start + i], &src, out);
            Ok(())
        })?;
        Ok(items.iter().map(|(_, p)| p).sum())
    }

    /// Stable time step proposal of the owned leaves (already × CFL).
    pub fn local_dt(&self, pool: &WorkerPool) -> Result<f64> {
        let (gamma, kernel) = (self.tree.scenario().gamma, self.kernels.dt);
        let per_leaf = pool.map(&self.tree.leaves()[self.owned.clone()], |_, g| kernel(g, gamma))?;
        Ok(self.cfl * per_leaf.into_iter().fold(f64::INFINITY, f64::min))
    }

    fn stage(&mut self, pool: &WorkerPool, stage: Stage, dt: f64) -> Result<()> {
        self.gather(pool, Fields::ALL)?;
        let gamma = self.tree.scenario().gamma;
        let advance = self.kernels.advance;
        let owned = self.owned.clone();
        let leaves = &mut self.tree.leaves_mut()[owned];
        let grav: Vec<Option<&[f64]>> = if self.gravity.is_empty() {
            vec![None; leaves.len()]
        } else {
            self.gravity.iter().map(|g| Some(&g[CELLS..])).collect()
        };
        let mut items: Vec<_> = leaves.iter_mut().zip(self.u0.iter_mut()).zip(&self.bufs).zip(grav).collect();
        pool.for_each_mut(&mut items, |_, (((g, u0), b), gr)| {
            GhostPlan::apply(g, Fields::ALL, b);
            let inp = StageInput { stage, dt, gamma, gravity: *gr, reflux: &b.reflux };
            advance(g, u0, &inp)
        })
    }

    /// One SSP-RK3 step with a given dt.
    pub fn step_with_dt(&mut self, pool: &WorkerPool, ex: &mut dyn Exchange, dt: f64) -> Result<()> {
        let s = self.step;
        let mut run = |me: &mut Self| -> Result<()> {
            if me.tree.scenario().gravity {
                ex.masses(&mut me.tree, s)?;
                me.update_gravity(pool)?;
            }
            for stage in Stage::ALL {
                ex.halo(&mut me.tree, s, stage)?;
                me.stage(pool, stage, dt)?;
            }
            Ok(())
        };
        run(self).map_err(|e| e.at_step(s))?;
        self.step += 1;
        self.time += dt;
        Ok(())
    }

    /// One step at the CFL-limited global dt; returns the dt used.
    pub fn step(&mut self, pool: &WorkerPool, ex: &mut dyn Exchange) -> Result<f64> {
        let s = self.step;
        let dt = self.local_dt(pool).and_then(|d| ex.min_dt(d, s)).map_err(|e| e.at_step(s))?;
        self.step_with_dt(pool, ex, dt)?;
        Ok(dt)
    }

    /// Step until `time == t_end`, shortening the last step to land on it.
    pub fn run_until(&mut self, pool: &WorkerPool, ex: &mut dyn Exchange, t_end: f64) -> Result<u64> {
        let mut n = 0;
        while self.time < t_end {
            let s = self.step;
            let dt = self.local_dt(pool).and_then(|d| ex.min_dt(d, s)).map_err(|e| e.at_step(s))?;
            let dt = dt.min(t_end - self.time);
            self.step_with_dt(pool, ex, dt)?;
            n += 1;
        }
        Ok(n)
    }

    /// Per-step inputs of the flop model for the owned leaves.
    pub fn step_shape(&mut self) -> StepShape {
        let gravity = self.tree.scenario().gravity;
        if gravity && self.pairs.is_none() {
            let src = Sources::from_leaves(self.tree.leaves());
            let leaves = self.tree.leaves();
            self.pairs = Some(self.owned.clone().map(|i| count_pairs(&leaves[i], &src)).sum());
        }
        StepShape {
            leaves: self.owned.len() as u64,
            coarse_fine_faces: self.owned.clone().map(|i| self.plan.reflux(i).len() as u64).sum(),
            gravity,
            gravity_pairs: self.pairs.unwrap_or(0),
        }
    }

    /// Modelled flops of `steps` steps on the owned leaves.
    pub fn flop_estimate(&mut self, steps: u64) -> u64 {
        KernelCostModel::STANDARD.estimate(&self.step_shape(), steps)
    }

    /// In-order sums over owned leaves (key order, then cell order) of each
    /// conserved field times cell volume.
    pub fn conserved_totals(&self) -> [f64; NFIELDS] {
        let mut s = [0.0; NFIELDS];
        for g in &self.tree.leaves()[self.owned.clone()] {
            let vol = g.dx() * g.dx() * g.dx();
            for (f, acc) in s.iter_mut().enumerate() {
                let b = g.field(f);
                for c in 0..CELLS {
                    *acc += b[box_of_interior(c)] * vol;
                }
            }
        }
        s
    }

    /// Total gravitational force `Σ rho g V` (in order) and `Σ |rho g V|`
    /// per component, from the current gravity cache.
    pub fn momentum_source_totals(&self) -> ([f64; 3], [f64; 3]) {
        let (mut sum, mut abs) = ([0.0; 3], [0.0; 3]);
        for (n, i) in self.owned.clone().enumerate() {
            let g = &self.tree.leaves()[i];
            let Some(cache) = self.gravity.get(n) else { break };
            let vol = g.dx() * g.dx() * g.dx();
            let rho = g.field(RHO);
            for c in 0..CELLS {
                for d in 0..3 {
                    let f = rho[box_of_interior(c)] * cache[(1 + d) * CELLS + c] * vol;
                    sum[d] += f;
                    abs[d] += f.abs();
                }
            }
        }
        (sum, abs)
    }
}
