//! Brute-force direct summation over every cell pair.

use octolite::mesh::subgrid::{idx, SubGrid, CELLS, N, RHO};
use octolite::physics::gravity::{cutoff, GRAVITY_STRIDE};

/// Every (target, source) cell pair, sources in key then storage order.
pub fn brute_force(leaves: &[SubGrid], target: usize) -> Vec<f64> {
    let t = &leaves[target];
    let mut out = vec![0.0; GRAVITY_STRIDE];
    let mut c = 0;
    for k in 1..=N {
        for j in 1..=N {
            for i in 1..=N {
                let xi = t.center(i, j, k);
                let (mut phi, mut g) = (0.0, [0.0; 3]);
                for s in leaves {
                    let (r2max, eps2) = cutoff(t.dx(), s.dx());
                    let vol = s.dx() * s.dx() * s.dx();
                    for kk in 1..=N {
                        for jj in 1..=N {
                            for ii in 1..=N {
                                let xj = s.center(ii, jj, kk);
                                let d = [xj[0] - xi[0], xj[1] - xi[1], xj[2] - xi[2]];
                                let r2 = (d[0] * d[0] + d[1] * d[1]) + d[2] * d[2];
                                if !(r2 > 0.0 && r2 <= r2max) {
                                    continue;
                                }
                                let inv = 1.0 / (r2 + eps2).sqrt();
                                let m = s.field(RHO)[idx(ii, jj, kk)] * vol;
                                let minv = m * inv;
                                let minv3 = minv * inv * inv;
                                phi += minv;
                                for a in 0..3 {
                                    g[a] += minv3 * d[a];
                                }
                            }
                        }
                    }
                }
                out[c] = -phi;
                for a in 0..3 {
                    out[(1 + a) * CELLS + c] = g[a];
                }
                c += 1;
            }
        }
    }
    out
}
