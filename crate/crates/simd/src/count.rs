//! Flop-counting wrapper used to check analytic cost models.
//!
//! `CountingPack<P>` behaves exactly like `P` but adds to a thread-local
//! counter on every arithmetic operation: one per lane for add, sub, mul,
//! div, sqrt, min and max, two per lane for fused multiply-add. Sign
//! manipulation (neg, abs, copysign), comparisons, selects and horizontal
//! reductions are free.

use std::cell::Cell;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::pack::{Backend, FloatPack, Pack};

thread_local! {
    static FLOPS: Cell<u64> = const { Cell::new(0) };
}

/// Flops counted on this thread since the last reset.
pub fn flops() -> u64 {
    FLOPS.with(|c| c.get())
}

pub fn reset_flops() {
    FLOPS.with(|c| c.set(0));
}

/// Returns the count and resets it.
pub fn take_flops() -> u64 {
    FLOPS.with(|c| c.replace(0))
}

#[inline(always)]
fn bump(n: usize) {
    FLOPS.with(|c| c.set(c.get() + n as u64));
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingPack<P>(pub P);

impl<P: Pack> Pack for CountingPack<P> {
    type Elem = P::Elem;
    type Mask = P::Mask;
    const LANES: usize = P::LANES;
    const BACKEND: Backend = P::BACKEND;

    fn splat(x: Self::Elem) -> Self {
        Self(P::splat(x))
    }
    fn from_slice(s: &[Self::Elem]) -> Self {
        Self(P::from_slice(s))
    }
    fn write_to_slice(self, s: &mut [Self::Elem]) {
        self.0.write_to_slice(s)
    }
    fn min(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0.min(o.0))
    }
    fn max(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0.max(o.0))
    }
    fn cmp_lt(self, o: Self) -> P::Mask {
        self.0.cmp_lt(o.0)
    }
    fn cmp_le(self, o: Self) -> P::Mask {
        self.0.cmp_le(o.0)
    }
    fn cmp_gt(self, o: Self) -> P::Mask {
        self.0.cmp_gt(o.0)
    }
    fn cmp_ge(self, o: Self) -> P::Mask {
        self.0.cmp_ge(o.0)
    }
    fn cmp_eq(self, o: Self) -> P::Mask {
        self.0.cmp_eq(o.0)
    }
    fn select(m: P::Mask, a: Self, b: Self) -> Self {
        Self(P::select(m, a.0, b.0))
    }
}

impl<P: Pack> Add for CountingPack<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0 + o.0)
    }
}

impl<P: Pack> Sub for CountingPack<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0 - o.0)
    }
}

impl<P: FloatPack> Mul for CountingPack<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0 * o.0)
    }
}

impl<P: FloatPack> Div for CountingPack<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        bump(P::LANES);
        Self(self.0 / o.0)
    }
}

impl<P: FloatPack> Neg for CountingPack<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl<P: FloatPack> FloatPack for CountingPack<P> {
    type Scalar = P::Scalar;

    fn sqrt(self) -> Self {
        bump(P::LANES);
        Self(self.0.sqrt())
    }
    fn abs(self) -> Self {
        Self(self.0.abs())
    }
    fn copysign(self, sign: Self) -> Self {
        Self(self.0.copysign(sign.0))
    }
    fn mul_add(self, b: Self, c: Self) -> Self {
        bump(2 * P::LANES);
        Self(self.0.mul_add(b.0, c.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ScalarPack;

    #[test]
    fn counts_per_lane() {
        type C = CountingPack<ScalarPack<f64, 4>>;
        reset_flops();
        let a = C::splat(2.0);
        let b = (a + a) * a - a / a;
        let _ = b.sqrt().mul_add(a, a).abs().min(a);
        let _ = b.cmp_lt(a);
        assert_eq!(take_flops(), 4 * (4 + 1 + 2 + 1));
        assert_eq!(flops(), 0);
    }
}
