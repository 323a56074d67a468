//! HLL approximate Riemann solver.

use lanepack::Pack;

use super::state::{primitive, Prim};
use super::Lanes;
use crate::mesh::Primitive;

/// One side of a face: conserved state plus the primitives the solver needs.
#[derive(Clone, Copy, Debug)]
pub struct FaceState<P> {
    pub u: [P; 5],
    pub prim: Prim<P>,
}

/// Physical flux along `axis`: 6 flops.
#[inline(always)]
fn physical<P: Lanes>(s: &FaceState<P>, axis: usize) -> [P; 5] {
    let un = s.prim.v[axis];
    let mut f = [s.u[1 + axis], s.u[1] * un, s.u[2] * un, s.u[3] * un, (s.u[4] + s.prim.p) * un];
    f[1 + axis] = f[1 + axis] + s.prim.p;
    f
}

/// HLL flux along `axis`: 56 flops per lane.
///
/// Wave speeds `sL = min(uL - cL, uR - cR)`, `sR = max(uL + cL, uR + cR)`.
/// Upwind cases select the one-sided physical flux; otherwise
/// `(sR FL - sL FR + sL sR (UR - UL)) / (sR - sL)`. When both speeds are
/// zero the quotient is NaN but one of the selects always takes over.
#[inline(always)]
pub fn hll<P: Lanes>(l: &FaceState<P>, r: &FaceState<P>, axis: usize) -> [P; 5] {
    let fl = physical(l, axis);
    let fr = physical(r, axis);
    let (ul, ur) = (l.prim.v[axis], r.prim.v[axis]);
    let sl = (ul - l.prim.c).min(ur - r.prim.c);
    let sr = (ul + l.prim.c).max(ur + r.prim.c);
    let inv = P::splat(1.0) / (sr - sl);
    let slsr = sl * sr;
    let take_l = sl.cmp_ge(P::splat(0.0));
    let take_r = sr.cmp_le(P::splat(0.0));
    std::array::from_fn(|f| {
        let mid = ((sr * fl[f] - sl * fr[f]) + slsr * (r.u[f] - l.u[f])) * inv;
        P::select(take_l, fl[f], P::select(take_r, fr[f], mid))
    })
}

/// Scalar convenience wrapper over primitive states.
pub fn hll_flux(left: Primitive, right: Primitive, axis: usize, gamma: f64) -> [f64; 5] {
    type S = lanepack::ScalarPack<f64, 1>;
    let side = |p: Primitive| {
        let u = p.to_conserved(gamma).map(S::splat);
        let prim = primitive(u[0], [u[1], u[2], u[3]], u[4], S::splat(gamma), S::splat(gamma - 1.0));
        FaceState { u, prim }
    };
    hll(&side(left), &side(right), axis).map(|x| x.lane(0))
}
