//! The pack and mask traits every backend implements.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::element::{Element, Float};
use crate::error::SimdError;

/// Upper bound on lanes of any pack this crate provides.
pub const MAX_LANES: usize = 8;

/// Which implementation family a pack type belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Plain per-lane loops; the semantic reference.
    ScalarReference,
    /// Native vector registers where the target has them.
    WideNative,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::ScalarReference => "scalar-reference",
            Backend::WideNative => "wide-native",
        })
    }
}

/// Per-lane boolean companion of a pack.
pub trait Mask: Copy + Debug + Send + Sync + 'static {
    const LANES: usize;

    fn splat(b: bool) -> Self;
    /// Builds a mask from the first `LANES` entries of `bits`.
    ///
    /// Panics if `bits` is shorter than `LANES`.
    fn from_bools(bits: &[bool]) -> Self;
    /// Lane `i` is bit `i` of the result.
    fn bitmask(self) -> u32;
    fn and(self, o: Self) -> Self;
    fn or(self, o: Self) -> Self;
    fn not(self) -> Self;

    #[inline]
    fn test(self, lane: usize) -> bool {
        assert!(lane < Self::LANES, "lane {lane} out of range for width {}", Self::LANES);
        self.bitmask() >> lane & 1 == 1
    }
    #[inline]
    fn all(self) -> bool {
        self.bitmask() == full_bits(Self::LANES)
    }
    #[inline]
    fn any(self) -> bool {
        self.bitmask() != 0
    }
    #[inline]
    fn none(self) -> bool {
        self.bitmask() == 0
    }
    #[inline]
    fn count(self) -> usize {
        self.bitmask().count_ones() as usize
    }
}

#[inline(always)]
pub(crate) const fn full_bits(lanes: usize) -> u32 {
    if lanes >= 32 {
        u32::MAX
    } else {
        (1u32 << lanes) - 1
    }
}

/// A fixed-width vector of same-typed lanes with value semantics.
pub trait Pack:
    Copy + Debug + Send + Sync + 'static + Add<Output = Self> + Sub<Output = Self>
{
    type Elem: Element;
    type Mask: Mask;
    const LANES: usize;
    const BACKEND: Backend;

    fn splat(x: Self::Elem) -> Self;

    /// Loads lanes from the first `LANES` entries of `s`. Panics if `s` is too short.
    fn from_slice(s: &[Self::Elem]) -> Self;

    /// Writes the lanes to the first `LANES` entries of `s`. Panics if `s` is too short.
    fn write_to_slice(self, s: &mut [Self::Elem]);

    fn min(self, o: Self) -> Self;
    fn max(self, o: Self) -> Self;

    fn cmp_lt(self, o: Self) -> Self::Mask;
    fn cmp_le(self, o: Self) -> Self::Mask;
    fn cmp_gt(self, o: Self) -> Self::Mask;
    fn cmp_ge(self, o: Self) -> Self::Mask;
    fn cmp_eq(self, o: Self) -> Self::Mask;

    /// Lane `i` is `a[i]` where `m[i]` is set, otherwise `b[i]`.
    fn select(m: Self::Mask, a: Self, b: Self) -> Self;

    /// Checked load of `LANES` elements starting at `offset`.
    #[inline]
    fn load(buf: &[Self::Elem], offset: usize) -> Result<Self, SimdError> {
        check_range(buf.len(), offset, Self::LANES)?;
        Ok(Self::from_slice(&buf[offset..]))
    }

    /// Checked store of `LANES` elements starting at `offset`. Nothing else is written.
    #[inline]
    fn store(self, buf: &mut [Self::Elem], offset: usize) -> Result<(), SimdError> {
        check_range(buf.len(), offset, Self::LANES)?;
        self.write_to_slice(&mut buf[offset..]);
        Ok(())
    }

    #[inline]
    fn lane(self, i: usize) -> Self::Elem {
        assert!(i < Self::LANES, "lane {i} out of range for width {}", Self::LANES);
        let mut tmp = [Self::Elem::ZERO; MAX_LANES];
        self.write_to_slice(&mut tmp);
        tmp[i]
    }

    /// Horizontal sum, accumulated strictly from lane 0 upwards.
    #[inline]
    fn reduce_sum(self) -> Self::Elem {
        let mut tmp = [Self::Elem::ZERO; MAX_LANES];
        self.write_to_slice(&mut tmp);
        tmp[1..Self::LANES].iter().fold(tmp[0], |acc, &x| acc.lane_add(x))
    }

    #[inline]
    fn reduce_min(self) -> Self::Elem {
        let mut tmp = [Self::Elem::ZERO; MAX_LANES];
        self.write_to_slice(&mut tmp);
        tmp[1..Self::LANES].iter().fold(tmp[0], |acc, &x| acc.lane_min(x))
    }

    #[inline]
    fn reduce_max(self) -> Self::Elem {
        let mut tmp = [Self::Elem::ZERO; MAX_LANES];
        self.write_to_slice(&mut tmp);
        tmp[1..Self::LANES].iter().fold(tmp[0], |acc, &x| acc.lane_max(x))
    }
}

/// Floating-point operations on top of [`Pack`].
pub trait FloatPack:
    Pack<Elem = Self::Scalar> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    type Scalar: Float;

    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn copysign(self, sign: Self) -> Self;
    /// `self * b + c`, rounded once.
    fn mul_add(self, b: Self, c: Self) -> Self;
}

#[inline]
pub(crate) fn check_range(len: usize, offset: usize, width: usize) -> Result<(), SimdError> {
    match offset.checked_add(width) {
        Some(end) if end <= len => Ok(()),
        _ => Err(SimdError::OutOfBounds { offset, width, len }),
    }
}
