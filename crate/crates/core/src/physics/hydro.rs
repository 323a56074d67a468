//! Finite-volume right-hand side and the fused SSP-RK3 stage update.
//!
//! Per leaf and stage: primitives on the 896 box cells the face stencil
//! touches, HLL fluxes on all 3 × 576 faces, coarse-face overrides from the
//! reflux buffers, then `dU/dt = -(1/dx) Σ_axes (F⁺ - F⁻) + S` and the stage
//! update, all row-wise in packs along x. Rows whose length is not a
//! multiple of the width use an overlapping last chunk, which recomputes a
//! few lanes identically rather than reading past the row.

use std::cell::RefCell;

use super::hll::{hll, FaceState};
use super::state::{primitive, valid_mask, Prim};
use super::Lanes;
use crate::error::{Error, Result};
use crate::mesh::ghost::{boundary_cell, face_axis, face_side, ghost_cell, RefluxBuf, FACE_CELLS, SUBFACES};
use crate::mesh::subgrid::{idx, interior_idx, SubGrid, BOX, CELLS, N, NB, NFIELDS};

const PRIMS: usize = 5; // vx, vy, vz, p, c
const STRIDE: [usize; 3] = [1, NB, NB * NB];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    First,
    Second,
    Third,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::First, Stage::Second, Stage::Third];

    pub fn index(self) -> u64 {
        self as u64
    }

    /// Shu–Osher SSP-RK3 in increment form: `u0` is the step-start state,
    /// `u` the current stage state and `l = L(u)`.
    ///
    /// `u1 = u0 + dt L(u0)`, `u2 = u0 + ¼ (u1 + dt L(u1) - u0)`,
    /// `u3 = u0 + ⅔ (u2 + dt L(u2) - u0)`; algebraically the usual
    /// `¾ u0 + ¼ (…)` / `⅓ u0 + ⅔ (…)` forms, but exact when `L ≡ 0`.
    #[inline(always)]
    pub fn combine<P: Lanes>(self, u0: P, u: P, dt: P, l: P) -> P {
        match self {
            Stage::First => u + dt * l,
            Stage::Second => u0 + P::splat(0.25) * ((u + dt * l) - u0),
            Stage::Third => u0 + P::splat(2.0 / 3.0) * ((u + dt * l) - u0),
        }
    }
}

pub struct StageInput<'a> {
    pub stage: Stage,
    pub dt: f64,
    pub gamma: f64,
    /// Cached acceleration `[gx | gy | gz]`, each 512 interior values.
    pub gravity: Option<&'a [f64]>,
    pub reflux: &'a [RefluxBuf],
}

pub struct Workspace {
    prim: Vec<f64>,
    flux: Vec<f64>,
    fine: Vec<f64>,
}

impl Workspace {
    fn new() -> Self {
        Workspace { prim: vec![0.0; PRIMS * BOX], flux: vec![0.0; 3 * NFIELDS * BOX], fine: vec![0.0; NFIELDS * SUBFACES] }
    }
}

thread_local! {
    static WORKSPACE: RefCell<Workspace> = RefCell::new(Workspace::new());
}

/// Chunk start positions covering `lo..lo + n` with width `w`, the last one
/// pulled back to stay inside the range.
#[inline(always)]
pub(crate) fn chunks(lo: usize, n: usize, w: usize) -> impl Iterator<Item = usize> {
    let full = n / w;
    let tail = (n % w != 0).then_some(lo + n - w);
    (0..full).map(move |c| lo + c * w).chain(tail)
}

#[inline(always)]
fn ld<P: Lanes>(s: &[f64], o: usize) -> P {
    P::from_slice(&s[o..])
}

fn bad_state(grid: &SubGrid, cell: [usize; 3], rho: f64, p: f64) -> Error {
    Error::State { key: grid.key(), cell, what: format!("rho = {rho:e}, p = {p:e}") }
}

fn primitives<P: Lanes>(grid: &SubGrid, gamma: f64, prim: &mut [f64]) -> Result<()> {
    let (g, gm1) = (P::splat(gamma), P::splat(gamma - 1.0));
    let u: [&[f64]; NFIELDS] = std::array::from_fn(|f| grid.field(f));
    for k in 0..NB {
        let kin = (1..=N).contains(&k);
        for j in 0..NB {
            let jin = (1..=N).contains(&j);
            let (lo, n) = match (jin, kin) {
                (true, true) => (0, NB),
                (true, false) | (false, true) => (1, N),
                _ => continue,
            };
            for s in chunks(lo, n, P::LANES) {
                let o = idx(s, j, k);
                let rho = ld::<P>(u[0], o);
                let pr = primitive(rho, [ld(u[1], o), ld(u[2], o), ld(u[3], o)], ld(u[4], o), g, gm1);
                let ok = valid_mask(rho, pr.p);
                if ok != (1u32 << P::LANES) - 1 {
                    let lane = (!ok).trailing_zeros() as usize;
                    return Err(bad_state(grid, [s + lane, j, k], rho.lane(lane), pr.p.lane(lane)));
                }
                for (q, v) in [pr.v[0], pr.v[1], pr.v[2], pr.p, pr.c].into_iter().enumerate() {
                    v.write_to_slice(&mut prim[q * BOX + o..]);
                }
            }
        }
    }
    Ok(())
}

#[inline(always)]
fn face_state<P: Lanes>(u: &[&[f64]; NFIELDS], prim: &[f64], o: usize) -> FaceState<P> {
    FaceState {
        u: std::array::from_fn(|f| ld(u[f], o)),
        prim: Prim {
            v: [ld(prim, o), ld(prim, BOX + o), ld(prim, 2 * BOX + o)],
            p: ld(prim, 3 * BOX + o),
            c: ld(prim, 4 * BOX + o),
        },
    }
}

#[inline(always)]
fn store_flux<P: Lanes>(flux: &mut [f64], axis: usize, o: usize, f: [P; NFIELDS]) {
    for (q, v) in f.into_iter().enumerate() {
        v.write_to_slice(&mut flux[(axis * NFIELDS + q) * BOX + o..]);
    }
}

/// Flux on the face below (along `axis`) of every box cell with the face's
/// cell index in `1..=9` and both other indices interior.
fn fluxes<P: Lanes>(grid: &SubGrid, prim: &[f64], flux: &mut [f64]) {
    let u: [&[f64]; NFIELDS] = std::array::from_fn(|f| grid.field(f));
    for k in 1..=N {
        for j in 1..=N {
            for s in chunks(1, N + 1, P::LANES) {
                let o = idx(s, j, k);
                let f = hll(&face_state::<P>(&u, prim, o - 1), &face_state(&u, prim, o), 0);
                store_flux(flux, 0, o, f);
            }
        }
    }
    for axis in 1..3 {
        for k in 1..=N + usize::from(axis == 2) {
            for j in 1..=N + usize::from(axis == 1) {
                for s in chunks(1, N, P::LANES) {
                    let o = idx(s, j, k);
                    let f = hll(&face_state::<P>(&u, prim, o - STRIDE[axis]), &face_state(&u, prim, o), axis);
                    store_flux(flux, axis, o, f);
                }
            }
        }
    }
}

/// Replace coarse boundary-face fluxes next to finer leaves by the mean of
/// the four fine fluxes the neighbours use.
fn reflux<P: Lanes>(bufs: &[RefluxBuf], gamma: f64, fine: &mut [f64], flux: &mut [f64]) {
    let (g, gm1) = (P::splat(gamma), P::splat(gamma - 1.0));
    let side = |s: &[f64], e: usize| {
        let u: [P; NFIELDS] = std::array::from_fn(|f| ld(s, f * SUBFACES + e));
        FaceState { u, prim: primitive(u[0], [u[1], u[2], u[3]], u[4], g, gm1) }
    };
    for rb in bufs {
        let face = rb.face as usize;
        let axis = face_axis(face);
        for e in (0..SUBFACES).step_by(P::LANES) {
            let f = hll(&side(&rb.left, e), &side(&rb.right, e), axis);
            for (q, v) in f.into_iter().enumerate() {
                v.write_to_slice(&mut fine[q * SUBFACES + e..]);
            }
        }
        for q in 0..NFIELDS {
            let ff = &fine[q * SUBFACES..(q + 1) * SUBFACES];
            let quarter: [[f64; FACE_CELLS]; 4] = std::array::from_fn(|sub| std::array::from_fn(|t| ff[4 * t + sub]));
            let mut mean = [0.0; FACE_CELLS];
            for t in (0..FACE_CELLS).step_by(P::LANES) {
                let [a, b, c, d] = quarter.each_ref().map(|s| ld::<P>(s, t));
                (((a + b) + (c + d)) * P::splat(0.25)).write_to_slice(&mut mean[t..]);
            }
            let dst = &mut flux[(axis * NFIELDS + q) * BOX..(axis * NFIELDS + q + 1) * BOX];
            for (t, m) in mean.into_iter().enumerate() {
                let [i, j, k] = if face_side(face) == 1 { ghost_cell(face, t) } else { boundary_cell(face, t) };
                dst[idx(i, j, k)] = m;
            }
        }
    }
}

/// `dU/dt` for one interior chunk, fields in order.
#[inline(always)]
fn rhs_chunk<P: Lanes>(flux: &[f64], u: &[P; NFIELDS], g: Option<[P; 3]>, o: usize, neg_inv_dx: P) -> [P; NFIELDS] {
    let mut l: [P; NFIELDS] = std::array::from_fn(|q| {
        let fx = &flux[q * BOX..];
        let fy = &flux[(NFIELDS + q) * BOX..];
        let fz = &flux[(2 * NFIELDS + q) * BOX..];
        let mut acc = ld::<P>(fx, o + 1) - ld(fx, o);
        acc = acc + (ld::<P>(fy, o + NB) - ld(fy, o));
        acc = acc + (ld::<P>(fz, o + NB * NB) - ld(fz, o));
        acc * neg_inv_dx
    });
    if let Some(g) = g {
        for d in 0..3 {
            l[1 + d] = l[1 + d] + u[0] * g[d];
        }
        l[4] = l[4] + ((u[1] * g[0] + u[2] * g[1]) + u[3] * g[2]);
    }
    l
}

/// Evaluate `L(u)` for one leaf with filled ghosts and apply one RK stage
/// to its interior. On the first stage `u0` (5 × 512, field-major) is
/// overwritten with the step-start interior.
pub fn advance_leaf<P: Lanes>(grid: &mut SubGrid, u0: &mut [f64], inp: &StageInput) -> Result<()> {
    WORKSPACE.with(|ws| {
        let ws = &mut *ws.borrow_mut();
        primitives::<P>(grid, inp.gamma, &mut ws.prim)?;
        fluxes::<P>(grid, &ws.prim, &mut ws.flux);
        reflux::<P>(inp.reflux, inp.gamma, &mut ws.fine, &mut ws.flux);
        let neg_inv_dx = P::splat(-1.0 / grid.dx());
        let dt = P::splat(inp.dt);
        let data = grid.data_mut();
        for k in 1..=N {
            for j in 1..=N {
                for s in chunks(1, N, P::LANES) {
                    let o = idx(s, j, k);
                    let io = interior_idx(s, j, k);
                    let u: [P; NFIELDS] = std::array::from_fn(|q| ld(data, q * BOX + o));
                    let g = inp.gravity.map(|g| std::array::from_fn(|d| ld(g, d * CELLS + io)));
                    let l = rhs_chunk(&ws.flux, &u, g, o, neg_inv_dx);
                    for q in 0..NFIELDS {
                        let base = ld::<P>(u0, q * CELLS + io);
                        let base = if inp.stage == Stage::First {
                            u[q].write_to_slice(&mut u0[q * CELLS + io..]);
                            u[q]
                        } else {
                            base
                        };
                        inp.stage.combine(base, u[q], dt, l[q]).write_to_slice(&mut data[q * BOX + o..]);
                    }
                }
            }
        }
        Ok(())
    })
}

/// `L(u)` only, written to `out` (5 × 512, field-major). Used by tests and
/// diagnostics; the time stepper uses [`advance_leaf`].
pub fn leaf_rhs<P: Lanes>(grid: &SubGrid, gamma: f64, gravity: Option<&[f64]>, reflux_bufs: &[RefluxBuf], out: &mut [f64]) -> Result<()> {
    WORKSPACE.with(|ws| {
        let ws = &mut *ws.borrow_mut();
        primitives::<P>(grid, gamma, &mut ws.prim)?;
        fluxes::<P>(grid, &ws.prim, &mut ws.flux);
        reflux::<P>(reflux_bufs, gamma, &mut ws.fine, &mut ws.flux);
        let neg_inv_dx = P::splat(-1.0 / grid.dx());
        let data = grid.data();
        for k in 1..=N {
            for j in 1..=N {
                for s in chunks(1, N, P::LANES) {
                    let o = idx(s, j, k);
                    let io = interior_idx(s, j, k);
                    let u: [P; NFIELDS] = std::array::from_fn(|q| ld(data, q * BOX + o));
                    let g = gravity.map(|g| std::array::from_fn(|d| ld(g, d * CELLS + io)));
                    for (q, l) in rhs_chunk(&ws.flux, &u, g, o, neg_inv_dx).into_iter().enumerate() {
                        l.write_to_slice(&mut out[q * CELLS + io..]);
                    }
                }
            }
        }
        Ok(())
    })
}

/// `min dx / (max_d |v_d| + c)` over the interior; the caller multiplies by
/// the CFL number. 18 flops per cell.
pub fn leaf_dt<P: Lanes>(grid: &SubGrid, gamma: f64) -> Result<f64> {
    let (g, gm1) = (P::splat(gamma), P::splat(gamma - 1.0));
    let dx = P::splat(grid.dx());
    let u: [&[f64]; NFIELDS] = std::array::from_fn(|f| grid.field(f));
    let mut best = f64::INFINITY;
    for k in 1..=N {
        for j in 1..=N {
            for s in chunks(1, N, P::LANES) {
                let o = idx(s, j, k);
                let rho = ld::<P>(u[0], o);
                let pr = primitive(rho, [ld(u[1], o), ld(u[2], o), ld(u[3], o)], ld(u[4], o), g, gm1);
                let ok = valid_mask(rho, pr.p);
                if ok != (1u32 << P::LANES) - 1 {
                    let lane = (!ok).trailing_zeros() as usize;
                    return Err(bad_state(grid, [s + lane, j, k], rho.lane(lane), pr.p.lane(lane)));
                }
                let vmax = pr.v[0].abs().max(pr.v[1].abs()).max(pr.v[2].abs());
                let t = dx / (vmax + pr.c);
                best = best.min(t.reduce_min());
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use lanepack::{F64x4, Pack, ScalarPack};

    #[test]
    fn chunk_cover() {
        assert_eq!(chunks(0, 10, 4).collect::<Vec<_>>(), vec![0, 4, 6]);
        assert_eq!(chunks(1, 9, 8).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(chunks(1, 8, 8).collect::<Vec<_>>(), vec![1]);
        assert_eq!(chunks(1, 9, 1).count(), 9);
    }

    #[test]
    fn stage_combine_linear_ode() {
        type S = ScalarPack<f64, 1>;
        let (lambda, dt, u0) = (-0.7, 0.3, 1.25);
        let s = S::splat;
        let mut u = s(u0);
        for st in Stage::ALL {
            u = st.combine(s(u0), u, s(dt), s(lambda) * u);
        }
        let z: f64 = lambda * dt;
        let want = u0 * (1.0 + z + z * z / 2.0 + z * z * z / 6.0);
        assert!((u.lane(0) - want).abs() < 1e-15);
        let _ = F64x4::splat(0.0);
    }
}
