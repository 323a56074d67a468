//! Scalar reference backend: one plain loop per operation.
//!
//! This is the semantic definition every other backend is checked against.
//! It is constructible for every element kind and every width.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::element::{Element, Float};
use crate::pack::{Backend, FloatPack, Mask, Pack};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarPack<T: Element, const W: usize> {
    lanes: [T; W],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarMask<const W: usize> {
    bits: [bool; W],
}

impl<T: Element, const W: usize> ScalarPack<T, W> {
    pub fn from_array(lanes: [T; W]) -> Self {
        Self { lanes }
    }

    pub fn to_array(self) -> [T; W] {
        self.lanes
    }

    #[inline(always)]
    fn zip(self, o: Self, f: impl Fn(T, T) -> T) -> Self {
        let mut lanes = self.lanes;
        for i in 0..W {
            lanes[i] = f(self.lanes[i], o.lanes[i]);
        }
        Self { lanes }
    }

    #[inline(always)]
    fn cmp(self, o: Self, f: impl Fn(T, T) -> bool) -> ScalarMask<W> {
        let mut bits = [false; W];
        for i in 0..W {
            bits[i] = f(self.lanes[i], o.lanes[i]);
        }
        ScalarMask { bits }
    }
}

impl<const W: usize> ScalarMask<W> {
    pub fn from_array(bits: [bool; W]) -> Self {
        Self { bits }
    }
}

impl<const W: usize> Mask for ScalarMask<W> {
    const LANES: usize = W;

    fn splat(b: bool) -> Self {
        Self { bits: [b; W] }
    }

    fn from_bools(bits: &[bool]) -> Self {
        let mut out = [false; W];
        out.copy_from_slice(&bits[..W]);
        Self { bits: out }
    }

    #[inline]
    fn bitmask(self) -> u32 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (b as u32) << i)
    }

    #[inline]
    fn and(self, o: Self) -> Self {
        let mut bits = self.bits;
        for i in 0..W {
            bits[i] &= o.bits[i];
        }
        Self { bits }
    }

    #[inline]
    fn or(self, o: Self) -> Self {
        let mut bits = self.bits;
        for i in 0..W {
            bits[i] |= o.bits[i];
        }
        Self { bits }
    }

    #[inline]
    fn not(self) -> Self {
        let mut bits = self.bits;
        for b in &mut bits {
            *b = !*b;
        }
        Self { bits }
    }
}

impl<T: Element, const W: usize> Pack for ScalarPack<T, W> {
    type Elem = T;
    type Mask = ScalarMask<W>;
    const LANES: usize = W;
    const BACKEND: Backend = Backend::ScalarReference;

    #[inline(always)]
    fn splat(x: T) -> Self {
        Self { lanes: [x; W] }
    }

    #[inline(always)]
    fn from_slice(s: &[T]) -> Self {
        let mut lanes = [T::ZERO; W];
        lanes.copy_from_slice(&s[..W]);
        Self { lanes }
    }

    #[inline(always)]
    fn write_to_slice(self, s: &mut [T]) {
        s[..W].copy_from_slice(&self.lanes);
    }

    #[inline(always)]
    fn min(self, o: Self) -> Self {
        self.zip(o, T::lane_min)
    }

    #[inline(always)]
    fn max(self, o: Self) -> Self {
        self.zip(o, T::lane_max)
    }

    #[inline(always)]
    fn cmp_lt(self, o: Self) -> ScalarMask<W> {
        self.cmp(o, |a, b| a < b)
    }

    #[inline(always)]
    fn cmp_le(self, o: Self) -> ScalarMask<W> {
        self.cmp(o, |a, b| a <= b)
    }

    #[inline(always)]
    fn cmp_gt(self, o: Self) -> ScalarMask<W> {
        self.cmp(o, |a, b| a > b)
    }

    #[inline(always)]
    fn cmp_ge(self, o: Self) -> ScalarMask<W> {
        self.cmp(o, |a, b| a >= b)
    }

    #[inline(always)]
    fn cmp_eq(self, o: Self) -> ScalarMask<W> {
        self.cmp(o, |a, b| a == b)
    }

    #[inline(always)]
    fn select(m: ScalarMask<W>, a: Self, b: Self) -> Self {
        let mut lanes = b.lanes;
        for i in 0..W {
            if m.bits[i] {
                lanes[i] = a.lanes[i];
            }
        }
        Self { lanes }
    }

    #[inline]
    fn lane(self, i: usize) -> T {
        self.lanes[i]
    }

    #[inline]
    fn reduce_sum(self) -> T {
        let mut acc = self.lanes[0];
        for &x in &self.lanes[1..] {
            acc = acc.lane_add(x);
        }
        acc
    }
}

impl<T: Element, const W: usize> Add for ScalarPack<T, W> {
    type Output = Self;
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        self.zip(o, T::lane_add)
    }
}

impl<T: Element, const W: usize> Sub for ScalarPack<T, W> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        self.zip(o, T::lane_sub)
    }
}

impl<T: Float, const W: usize> Mul for ScalarPack<T, W> {
    type Output = Self;
    #[inline(always)]
    fn mul(self, o: Self) -> Self {
        self.zip(o, T::lane_mul)
    }
}

impl<T: Float, const W: usize> Div for ScalarPack<T, W> {
    type Output = Self;
    #[inline(always)]
    fn div(self, o: Self) -> Self {
        self.zip(o, T::lane_div)
    }
}

impl<T: Float, const W: usize> Neg for ScalarPack<T, W> {
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        let mut lanes = self.lanes;
        for x in &mut lanes {
            *x = x.lane_neg();
        }
        Self { lanes }
    }
}

impl<T: Float, const W: usize> FloatPack for ScalarPack<T, W> {
    type Scalar = T;

    #[inline(always)]
    fn sqrt(self) -> Self {
        let mut lanes = self.lanes;
        for x in &mut lanes {
            *x = x.lane_sqrt();
        }
        Self { lanes }
    }

    #[inline(always)]
    fn abs(self) -> Self {
        let mut lanes = self.lanes;
        for x in &mut lanes {
            *x = x.lane_abs();
        }
        Self { lanes }
    }

    #[inline(always)]
    fn copysign(self, sign: Self) -> Self {
        self.zip(sign, T::lane_copysign)
    }

    #[inline(always)]
    fn mul_add(self, b: Self, c: Self) -> Self {
        let mut lanes = self.lanes;
        for i in 0..W {
            lanes[i] = self.lanes[i].lane_fma(b.lanes[i], c.lanes[i]);
        }
        Self { lanes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F4 = ScalarPack<f64, 4>;

    #[test]
    fn splat_and_lanes() {
        let p = F4::splat(3.0);
        assert_eq!(p.to_array(), [3.0; 4]);
        let nan = f64::from_bits(0x7ff8_dead_beef_0001);
        let q = F4::splat(nan);
        for x in q.to_array() {
            assert_eq!(x.to_bits(), nan.to_bits());
        }
    }

    #[test]
    fn load_store_bounds() {
        let buf = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(F4::load(&buf, 1).unwrap().to_array(), [2.0, 3.0, 4.0, 5.0]);
        assert!(F4::load(&buf, 2).is_err());
        let mut out = [0.0; 4];
        ScalarPack::<f64, 2>::splat(7.0).store(&mut out, 1).unwrap();
        assert_eq!(out, [0.0, 7.0, 7.0, 0.0]);
        assert!(ScalarPack::<f64, 2>::splat(7.0).store(&mut out, 3).is_err());
    }

    #[test]
    fn cancellation_sum_is_left_to_right() {
        let p = F4::from_array([1e16, 1.0, -1e16, 1.0]);
        let seq = ((1e16f64 + 1.0) + -1e16) + 1.0;
        assert_eq!(p.reduce_sum().to_bits(), seq.to_bits());
    }

    #[test]
    fn mask_queries() {
        let m = ScalarMask::<4>::from_array([true, false, true, false]);
        assert_eq!(m.count(), 2);
        assert!(m.any() && !m.all() && !m.none());
        assert!(ScalarMask::<4>::splat(true).all());
        assert!(ScalarMask::<4>::splat(false).none());
    }

    #[test]
    fn compare_against_nan_is_false() {
        let a = F4::from_array([f64::NAN, 1.0, f64::NAN, 2.0]);
        let b = F4::splat(1.0);
        assert_eq!(a.cmp_eq(b).bitmask(), 0b0010);
        assert_eq!(a.cmp_lt(b).bitmask(), 0);
        assert_eq!(a.cmp_ge(b).bitmask(), 0b1010);
    }
}
