//! Conserved ↔ primitive conversion for an ideal gas.

use lanepack::Pack;

use crate::error::{Error, Result};
use crate::mesh::Primitive;

use super::Lanes;

/// Primitive quantities the flux and time-step kernels need, one cell per
/// lane. Density is not repeated; callers hold the conserved state.
#[derive(Clone, Copy, Debug)]
pub struct Prim<P> {
    pub v: [P; 3],
    pub p: P,
    pub c: P,
}

/// 14 flops per lane: 3 div, ke 5, pressure 3, sound speed 3.
#[inline(always)]
pub fn primitive<P: Lanes>(rho: P, m: [P; 3], e: P, gamma: P, gm1: P) -> Prim<P> {
    let v = [m[0] / rho, m[1] / rho, m[2] / rho];
    let ke = (m[0] * v[0] + m[1] * v[1]) + m[2] * v[2];
    let p = gm1 * (e - P::splat(0.5) * ke);
    let c = (gamma * p / rho).sqrt();
    Prim { v, p, c }
}

/// Lanes that hold a usable state: finite positive density, finite
/// non-negative pressure.
#[inline(always)]
pub fn valid_mask<P: Lanes>(rho: P, p: P) -> u32 {
    use lanepack::Mask;
    let inf = P::splat(f64::INFINITY);
    rho.cmp_gt(P::splat(0.0)).and(rho.cmp_lt(inf)).and(p.cmp_ge(P::splat(0.0))).and(p.cmp_lt(inf)).bitmask()
}

pub fn to_primitive(u: [f64; 5], gamma: f64) -> Result<Primitive> {
    if !(u[0] > 0.0) {
        return Err(Error::Config(format!("non-positive density {}", u[0])));
    }
    type S = lanepack::ScalarPack<f64, 1>;
    let s = S::splat;
    let pr = primitive(s(u[0]), [s(u[1]), s(u[2]), s(u[3])], s(u[4]), s(gamma), s(gamma - 1.0));
    Ok(Primitive { rho: u[0], v: pr.v.map(|x| x.lane(0)), p: pr.p.lane(0) })
}

pub fn to_conserved(p: Primitive, gamma: f64) -> [f64; 5] {
    p.to_conserved(gamma)
}
