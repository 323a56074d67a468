//! The graded octree of sub-grids.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::subgrid::{idx, SubGrid, CELLS, N, NFIELDS};
use super::{Boundary, Key, Scenario, MAX_LEVEL};
use crate::error::{Error, Result};

/// What covers a given node position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cover {
    /// A leaf at exactly the queried level.
    Leaf(usize),
    /// The node exists and is refined further.
    Finer,
    /// A leaf at a coarser level contains the position.
    Coarser(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf(usize),
    Interior,
}

#[derive(Clone, Debug)]
pub struct Tree {
    scenario: Scenario,
    max_level: u8,
    leaves: Vec<SubGrid>,
    index: HashMap<Key, usize>,
    interior: HashSet<Key>,
}

impl Tree {
    /// Refine from the root by the density-gradient trigger, grade to 2:1 and
    /// fill every leaf from the analytic initial condition. `seed` drives the
    /// optional density perturbation.
    pub fn build(scenario: &Scenario, max_level: u8, seed: u64) -> Result<Tree> {
        scenario.validate()?;
        if max_level > MAX_LEVEL {
            return Err(Error::config(format!("max_level must be in 0..={MAX_LEVEL}, got {max_level}")));
        }
        let shape = refine_shape(scenario, max_level);
        let leaves = shape.into_iter().map(|k| init_leaf(scenario, k, seed)).collect();
        Tree::from_leaves(scenario.clone(), max_level, leaves)
    }

    /// Assemble a tree from leaves (any order); checks that they tile the
    /// domain and are graded.
    pub fn from_leaves(scenario: Scenario, max_level: u8, mut leaves: Vec<SubGrid>) -> Result<Tree> {
        leaves.sort_by_key(|g| g.key());
        let mut index = HashMap::with_capacity(leaves.len());
        let mut interior = HashSet::new();
        let mut volume = 0u128;
        for (i, g) in leaves.iter().enumerate() {
            let k = g.key();
            if k.level() > max_level {
                return Err(Error::Structure(format!("leaf {k} deeper than max_level {max_level}")));
            }
            if index.insert(k, i).is_some() {
                return Err(Error::Structure(format!("duplicate leaf {k}")));
            }
            let mut a = k;
            while let Some(p) = a.parent() {
                interior.insert(p);
                a = p;
            }
            volume += 1u128 << (3 * (MAX_LEVEL - k.level()) as u32);
        }
        if let Some(k) = index.keys().find(|k| interior.contains(k)) {
            return Err(Error::Structure(format!("leaf {k} also has children")));
        }
        if volume != 1u128 << (3 * MAX_LEVEL as u32) {
            return Err(Error::Structure("leaves do not tile the domain".into()));
        }
        let t = Tree { scenario, max_level, leaves, index, interior };
        t.check_graded()?;
        Ok(t)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn max_level(&self) -> u8 {
        self.max_level
    }

    pub fn boundary(&self) -> Boundary {
        self.scenario.boundary
    }

    pub fn leaves(&self) -> &[SubGrid] {
        &self.leaves
    }

    pub fn leaves_mut(&mut self) -> &mut [SubGrid] {
        &mut self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// `(leaves, cells)` with `cells = 512 * leaves`.
    pub fn counts(&self) -> (usize, usize) {
        (self.leaves.len(), self.leaves.len() * CELLS)
    }

    pub fn leaf_index(&self, key: Key) -> Option<usize> {
        self.index.get(&key).copied()
    }

    pub fn node(&self, key: Key) -> Option<Node> {
        if let Some(&i) = self.index.get(&key) {
            Some(Node::Leaf(i))
        } else if self.interior.contains(&key) {
            Some(Node::Interior)
        } else {
            None
        }
    }

    /// Who covers node position `c` at `level` (coordinates already inside
    /// the domain).
    pub fn cover(&self, level: u8, c: [u32; 3]) -> Cover {
        let k = Key::from_coords(level, c);
        if let Some(&i) = self.index.get(&k) {
            return Cover::Leaf(i);
        }
        if self.interior.contains(&k) {
            return Cover::Finer;
        }
        let mut a = k;
        while let Some(p) = a.parent() {
            if let Some(&i) = self.index.get(&p) {
                return Cover::Coarser(i);
            }
            a = p;
        }
        unreachable!("leaves tile the domain")
    }

    /// Face neighbour position of node `c` at `level` along `axis` in
    /// direction `dir` (±1); `None` when it leaves a non-periodic domain.
    pub fn neighbor_coords(&self, level: u8, c: [u32; 3], axis: usize, dir: i64) -> Option<[u32; 3]> {
        neighbor(self.scenario.boundary, level, c, axis, dir)
    }

    /// Adjacent leaves may differ by at most one level.
    pub fn check_graded(&self) -> Result<()> {
        for g in &self.leaves {
            let k = g.key();
            for axis in 0..3 {
                for dir in [-1, 1] {
                    let Some(nc) = self.neighbor_coords(k.level(), k.coords(), axis, dir) else { continue };
                    if let Cover::Coarser(i) = self.cover(k.level(), nc) {
                        let other = self.leaves[i].key();
                        if other.level() + 1 < k.level() {
                            return Err(Error::Structure(format!("leaves {k} and {other} violate 2:1 grading")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Leaf index ranges per rank: key order split into contiguous chunks
    /// whose sizes differ by at most one.
    pub fn partition(&self, nranks: usize) -> Vec<Range<usize>> {
        partition(self.leaves.len(), nranks)
    }
}

pub fn partition(n: usize, nranks: usize) -> Vec<Range<usize>> {
    assert!(nranks >= 1);
    let (base, extra) = (n / nranks, n % nranks);
    let mut start = 0;
    (0..nranks)
        .map(|r| {
            let len = base + usize::from(r < extra);
            let range = start..start + len;
            start += len;
            range
        })
        .collect()
}

fn neighbor(boundary: Boundary, level: u8, c: [u32; 3], axis: usize, dir: i64) -> Option<[u32; 3]> {
    let n = 1i64 << level;
    let mut out = c;
    let x = c[axis] as i64 + dir;
    out[axis] = if (0..n).contains(&x) {
        x as u32
    } else if boundary == Boundary::Periodic {
        x.rem_euclid(n) as u32
    } else {
        return None;
    };
    Some(out)
}

/// Max over a node's cells of |grad rho| dx / rho, with central differences
/// of the analytic density at x ± dx.
pub fn refine_trigger(s: &Scenario, key: Key) -> f64 {
    let g = SubGrid::new(key, s.domain_edge);
    let dx = g.dx();
    let mut worst = 0.0f64;
    for k in 1..=N {
        for j in 1..=N {
            for i in 1..=N {
                let x = g.center(i, j, k);
                let rho = s.density_at(x);
                let mut g2 = 0.0;
                for a in 0..3 {
                    let (mut lo, mut hi) = (x, x);
                    lo[a] -= dx;
                    hi[a] += dx;
                    let d = (s.density_at(hi) - s.density_at(lo)) / (2.0 * dx);
                    g2 += d * d;
                }
                worst = worst.max(g2.sqrt() * dx / rho);
            }
        }
    }
    worst
}

/// Leaf keys after trigger refinement and 2:1 grading.
pub fn refine_shape(s: &Scenario, max_level: u8) -> BTreeSet<Key> {
    let mut leaves = BTreeSet::from([Key::ROOT]);
    let mut frontier = vec![Key::ROOT];
    while let Some(k) = frontier.pop() {
        if k.level() < max_level && refine_trigger(s, k) >= s.refine_threshold {
            leaves.remove(&k);
            for c in k.children() {
                leaves.insert(c);
                frontier.push(c);
            }
        }
    }
    grade(s.boundary, &mut leaves);
    leaves
}

fn covering(leaves: &BTreeSet<Key>, level: u8, c: [u32; 3]) -> Option<Key> {
    let k = Key::from_coords(level, c);
    (0..=level).rev().map(|l| k.ancestor(l)).find(|a| leaves.contains(a))
}

fn grade(boundary: Boundary, leaves: &mut BTreeSet<Key>) {
    loop {
        let mut split = BTreeSet::new();
        for &k in leaves.iter() {
            for axis in 0..3 {
                for dir in [-1, 1] {
                    let Some(nc) = neighbor(boundary, k.level(), k.coords(), axis, dir) else { continue };
                    if let Some(n) = covering(leaves, k.level(), nc) {
                        if n.level() + 1 < k.level() {
                            split.insert(n);
                        }
                    }
                }
            }
        }
        if split.is_empty() {
            return;
        }
        for k in split {
            leaves.remove(&k);
            leaves.extend(k.children());
        }
    }
}

fn init_leaf(s: &Scenario, key: Key, seed: u64) -> SubGrid {
    let mut g = SubGrid::new(key, s.domain_edge);
    let mut rng = (s.perturbation > 0.0).then(|| {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&key.raw().to_le_bytes());
        ChaCha8Rng::from_seed(bytes)
    });
    for k in 1..=N {
        for j in 1..=N {
            for i in 1..=N {
                let mut p = s.primitive_at(g.center(i, j, k));
                if let Some(r) = rng.as_mut() {
                    p.rho *= 1.0 + s.perturbation * r.gen_range(-1.0..1.0);
                }
                let u = p.to_conserved(s.gamma);
                for (f, v) in u.into_iter().enumerate().take(NFIELDS) {
                    g.set(f, idx(i, j, k), v);
                }
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::ScenarioName;

    fn sod(threshold: f64) -> Scenario {
        Scenario { refine_threshold: threshold, ..Scenario::preset(ScenarioName::Sod) }
    }

    #[test]
    fn no_trigger_gives_root() {
        let t = Tree::build(&sod(f64::INFINITY), 2, 0).unwrap();
        assert_eq!(t.counts(), (1, 512));
    }

    #[test]
    fn zero_threshold_gives_uniform() {
        let t = Tree::build(&sod(0.0), 2, 0).unwrap();
        assert_eq!(t.counts(), (64, 32_768));
        assert!(t.leaves().iter().all(|g| g.level() == 2));
        let t = Tree::build(&sod(0.0), 1, 0).unwrap();
        assert_eq!(t.counts(), (8, 4096));
    }

    #[test]
    fn rejects_deep_levels() {
        assert!(matches!(Tree::build(&sod(0.1), 8, 0), Err(Error::Config(_))));
    }

    #[test]
    fn sod_refines_around_diaphragm_and_is_graded() {
        let t = Tree::build(&sod(0.1), 4, 0).unwrap();
        t.check_graded().unwrap();
        for g in t.leaves() {
            let x0 = g.key().coords()[0] as f64 / (1u32 << g.level()) as f64;
            let w = 1.0 / (1u32 << g.level()) as f64;
            if g.level() == 4 {
                assert!(x0 + w > 0.375 - 1e-12 && x0 < 0.625 + 1e-12, "{}", g.key());
            }
        }
        let keys: Vec<Key> = t.leaves().iter().map(|g| g.key()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn partition_balanced() {
        let p = partition(10, 3);
        assert_eq!(p, vec![0..4, 4..7, 7..10]);
        assert_eq!(partition(64, 2), vec![0..32, 32..64]);
        assert_eq!(partition(5, 1), vec![0..5]);
    }

    #[test]
    fn from_leaves_rejects_gaps() {
        let s = sod(0.1);
        let leaves = vec![SubGrid::new(Key::ROOT.child(0), 1.0)];
        assert!(matches!(Tree::from_leaves(s, 2, leaves), Err(Error::Structure(_))));
    }

    #[test]
    fn ungraded_is_rejected() {
        let s = sod(0.1);
        let mut keys: Vec<Key> = Key::ROOT.children().to_vec();
        keys.remove(0);
        let deep = Key::ROOT.child(0);
        keys.extend(deep.children().iter().filter(|&&c| c != deep.child(7)));
        keys.extend(deep.child(7).children());
        let leaves = keys.into_iter().map(|k| SubGrid::new(k, 1.0)).collect();
        assert!(matches!(Tree::from_leaves(s, 3, leaves), Err(Error::Structure(_))));
    }

    #[test]
    fn perturbation_is_seeded() {
        let s = Scenario { perturbation: 0.01, ..sod(0.1) };
        let a = Tree::build(&s, 2, 7).unwrap();
        let b = Tree::build(&s, 2, 7).unwrap();
        let c = Tree::build(&s, 2, 8).unwrap();
        assert_eq!(a.leaves()[0].data(), b.leaves()[0].data());
        assert_ne!(a.leaves()[0].data(), c.leaves()[0].data());
    }
}
