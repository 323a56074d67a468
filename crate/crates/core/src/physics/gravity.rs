//! Softened direct-sum gravity over a bounded neighbourhood.
//!
//! For a target cell `i` and source cell `j` at separation `d = x_j - x_i`:
//!
//! ```text
//! phi_i = -Σ_j m_j / sqrt(r² + ε²)
//! g_i   =  Σ_j m_j d / (r² + ε²)^{3/2}
//! ```
//!
//! over pairs with `0 < r² ≤ R²`. Cutoff and softening are symmetrised per
//! pair: `R = 16 min(dx_i, dx_j)` (two sub-grid edges of the finer cell) and
//! `ε = max(dx_i, dx_j) / 2` (half the coarser cell), so the pair force is
//! exactly antisymmetric and the total momentum source cancels to
//! round-off. `g` is the analytic gradient of the same kernel.
//!
//! Targets are the 8 cells of an x-row, in packs; sources are visited in
//! leaf key order and then storage order, identically at every width, so
//! results do not depend on the pack width. Whole source rows that cannot
//! reach any target of the row are skipped; the per-pair mask alone decides
//! membership, so skipping changes nothing but the work done.

use super::Lanes;
use crate::mesh::subgrid::{SubGrid, CELLS, N, RHO};
use crate::mesh::subgrid::idx;

/// Floats per leaf in the gravity cache: phi, gx, gy, gz.
pub const GRAVITY_STRIDE: usize = 4 * CELLS;
const ROWS: usize = N * N;
/// Relative slack on the row-skipping test; the pair mask is exact.
const PRUNE_SLACK: f64 = 1e-9;

pub fn cutoff(dx_i: f64, dx_j: f64) -> (f64, f64) {
    let r = 2.0 * N as f64 * dx_i.min(dx_j);
    let eps = 0.5 * dx_i.max(dx_j);
    (r * r, eps * eps)
}

/// Source masses and positions of every leaf, in key order.
pub struct Sources {
    leaves: Vec<SourceLeaf>,
}

struct SourceLeaf {
    dx: f64,
    lo: [f64; 3],
    hi: [f64; 3],
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    m: Vec<f64>,
}

fn centers(g: &SubGrid) -> [Vec<f64>; 3] {
    let mut out = [Vec::with_capacity(CELLS), Vec::with_capacity(CELLS), Vec::with_capacity(CELLS)];
    for k in 1..=N {
        for j in 1..=N {
            for i in 1..=N {
                let c = g.center(i, j, k);
                for a in 0..3 {
                    out[a].push(c[a]);
                }
            }
        }
    }
    out
}

impl Sources {
    pub fn from_leaves(leaves: &[SubGrid]) -> Self {
        let leaves = leaves
            .iter()
            .map(|g| {
                let [x, y, z] = centers(g);
                let vol = g.dx() * g.dx() * g.dx();
                let rho = g.field(RHO);
                let mut m = Vec::with_capacity(CELLS);
                for k in 1..=N {
                    for j in 1..=N {
                        for i in 1..=N {
                            m.push(rho[idx(i, j, k)] * vol);
                        }
                    }
                }
                let lo = [x[0], y[0], z[0]];
                let hi = [x[CELLS - 1], y[CELLS - 1], z[CELLS - 1]];
                SourceLeaf { dx: g.dx(), lo, hi, x, y, z, m }
            })
            .collect();
        Sources { leaves }
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }
}

fn gap(a_lo: f64, a_hi: f64, b_lo: f64, b_hi: f64) -> f64 {
    (b_lo - a_hi).max(a_lo - b_hi).max(0.0)
}

fn gap2(lo: [f64; 3], hi: [f64; 3], blo: [f64; 3], bhi: [f64; 3]) -> f64 {
    (0..3).map(|a| gap(lo[a], hi[a], blo[a], bhi[a]).powi(2)).sum()
}

#[derive(Clone, Copy)]
struct RowVisit {
    leaf: u32,
    row: u16,
    r2: f64,
    eps2: f64,
}

/// Source rows that may interact with a target row segment.
fn rows_for(src: &Sources, dx: f64, lo: [f64; 3], hi: [f64; 3], out: &mut Vec<RowVisit>) {
    out.clear();
    for (li, s) in src.leaves.iter().enumerate() {
        let (r2, eps2) = cutoff(dx, s.dx);
        let lim = r2 * (1.0 + PRUNE_SLACK);
        if gap2(lo, hi, s.lo, s.hi) > lim {
            continue;
        }
        for row in 0..ROWS {
            let b = row * N;
            let rlo = [s.x[b], s.y[b], s.z[b]];
            let rhi = [s.x[b + N - 1], s.y[b], s.z[b]];
            if gap2(lo, hi, rlo, rhi) <= lim {
                out.push(RowVisit { leaf: li as u32, row: row as u16, r2, eps2 });
            }
        }
    }
}

/// Potential and acceleration of one target leaf into `out`
/// (`GRAVITY_STRIDE` values: phi, gx, gy, gz). Returns the number of pair
/// evaluations (lanes, masked or not). 21 flops per pair.
pub fn gravity_leaf<P: Lanes>(target: &SubGrid, src: &Sources, out: &mut [f64]) -> u64 {
    let [tx, ty, tz] = centers(target);
    let mut visits = Vec::new();
    let mut pairs = 0u64;
    let zero = P::splat(0.0);
    for row in 0..ROWS {
        let b = row * N;
        let lo = [tx[b], ty[b], tz[b]];
        let hi = [tx[b + N - 1], ty[b], tz[b]];
        rows_for(src, target.dx(), lo, hi, &mut visits);
        pairs += (visits.len() * N * N) as u64;
        for t in (0..N).step_by(P::LANES) {
            let xi = P::from_slice(&tx[b + t..]);
            let (yi, zi) = (P::splat(ty[b]), P::splat(tz[b]));
            let (mut phi, mut gx, mut gy, mut gz) = (zero, zero, zero, zero);
            for v in &visits {
                let s = &src.leaves[v.leaf as usize];
                let (r2max, eps2) = (P::splat(v.r2), P::splat(v.eps2));
                let sb = v.row as usize * N;
                for c in sb..sb + N {
                    let dx = P::splat(s.x[c]) - xi;
                    let dy = P::splat(s.y[c]) - yi;
                    let dz = P::splat(s.z[c]) - zi;
                    let r2 = (dx * dx + dy * dy) + dz * dz;
                    let mask = lanepack::Mask::and(r2.cmp_le(r2max), r2.cmp_gt(zero));
                    let inv = P::splat(1.0) / (r2 + eps2).sqrt();
                    let minv = P::select(mask, P::splat(s.m[c]) * inv, zero);
                    let minv3 = minv * inv * inv;
                    phi = phi + minv;
                    gx = gx + minv3 * dx;
                    gy = gy + minv3 * dy;
                    gz = gz + minv3 * dz;
                }
            }
            (-phi).write_to_slice(&mut out[b + t..]);
            gx.write_to_slice(&mut out[CELLS + b + t..]);
            gy.write_to_slice(&mut out[2 * CELLS + b + t..]);
            gz.write_to_slice(&mut out[3 * CELLS + b + t..]);
        }
    }
    pairs
}

/// Pair evaluations [`gravity_leaf`] performs for `target`, without doing
/// them.
pub fn count_pairs(target: &SubGrid, src: &Sources) -> u64 {
    let [tx, ty, tz] = centers(target);
    let mut visits = Vec::new();
    let mut pairs = 0;
    for row in 0..ROWS {
        let b = row * N;
        rows_for(src, target.dx(), [tx[b], ty[b], tz[b]], [tx[b + N - 1], ty[b], tz[b]], &mut visits);
        pairs += (visits.len() * N * N) as u64;
    }
    pairs
}
