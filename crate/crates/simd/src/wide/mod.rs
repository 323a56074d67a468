//! Wide backend: packs built from one or more native registers.
//!
//! A [`Wide<R, N>`] holds `N` registers of type `R`, so its width is
//! `N * R::LANES`. Registers are plain lane values on targets without vector
//! support and for widths narrower than one native register.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::element::{Element, Float};
use crate::pack::{Backend, FloatPack, Mask, Pack, MAX_LANES};

mod lane;
#[cfg(target_arch = "x86_64")]
mod x86;

/// One native register worth of lanes.
///
/// # Safety
///
/// `load` and `store` must touch exactly `LANES` elements at the pointer.
pub unsafe trait Reg: Copy + Debug + Send + Sync + 'static {
    type Elem: Element;
    type MaskReg: Copy + Debug + Send + Sync + 'static;
    const LANES: usize;

    /// # Safety
    /// `ptr` must be valid for reading `LANES` elements.
    unsafe fn load(ptr: *const Self::Elem) -> Self;
    /// # Safety
    /// `ptr` must be valid for writing `LANES` elements.
    unsafe fn store(self, ptr: *mut Self::Elem);

    fn splat(x: Self::Elem) -> Self;
    fn add(self, o: Self) -> Self;
    fn sub(self, o: Self) -> Self;
    fn min(self, o: Self) -> Self;
    fn max(self, o: Self) -> Self;
    fn lt(self, o: Self) -> Self::MaskReg;
    fn le(self, o: Self) -> Self::MaskReg;
    fn gt(self, o: Self) -> Self::MaskReg;
    fn ge(self, o: Self) -> Self::MaskReg;
    fn eq(self, o: Self) -> Self::MaskReg;
    /// `a` where `m` is set, else `b`.
    fn blend(m: Self::MaskReg, a: Self, b: Self) -> Self;

    fn mask_bits(m: Self::MaskReg) -> u32;
    fn mask_from_bits(bits: u32) -> Self::MaskReg;
    fn mask_and(a: Self::MaskReg, b: Self::MaskReg) -> Self::MaskReg;
    fn mask_or(a: Self::MaskReg, b: Self::MaskReg) -> Self::MaskReg;
    fn mask_not(a: Self::MaskReg) -> Self::MaskReg;
}

pub trait FloatReg: Reg
where
    Self::Elem: Float,
{
    fn mul(self, o: Self) -> Self;
    fn div(self, o: Self) -> Self;
    fn sqrt(self) -> Self;
    fn neg(self) -> Self;
    fn abs(self) -> Self;
    fn copysign(self, sign: Self) -> Self;
    fn fma(self, b: Self, c: Self) -> Self;
}

#[derive(Clone, Copy)]
pub struct Wide<R: Reg, const N: usize> {
    regs: [R; N],
}

#[derive(Clone, Copy)]
pub struct WideMask<R: Reg, const N: usize> {
    regs: [R::MaskReg; N],
}

impl<R: Reg, const N: usize> Debug for Wide<R, N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut tmp = [R::Elem::ZERO; MAX_LANES];
        self.write_to_slice(&mut tmp);
        f.debug_tuple("Wide").field(&&tmp[..Self::LANES]).finish()
    }
}

impl<R: Reg, const N: usize> Debug for WideMask<R, N> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "WideMask({:0w$b})", self.bitmask(), w = Self::LANES)
    }
}

impl<R: Reg, const N: usize> Wide<R, N> {
    #[inline(always)]
    fn map2(self, o: Self, f: impl Fn(R, R) -> R) -> Self {
        let mut regs = self.regs;
        for k in 0..N {
            regs[k] = f(self.regs[k], o.regs[k]);
        }
        Self { regs }
    }

    #[inline(always)]
    fn map1(self, f: impl Fn(R) -> R) -> Self {
        let mut regs = self.regs;
        for r in &mut regs {
            *r = f(*r);
        }
        Self { regs }
    }

    #[inline(always)]
    fn cmp(self, o: Self, f: impl Fn(R, R) -> R::MaskReg) -> WideMask<R, N> {
        let mut regs = [R::mask_from_bits(0); N];
        for k in 0..N {
            regs[k] = f(self.regs[k], o.regs[k]);
        }
        WideMask { regs }
    }
}

impl<R: Reg, const N: usize> Mask for WideMask<R, N> {
    const LANES: usize = N * R::LANES;

    #[inline]
    fn splat(b: bool) -> Self {
        let bits = if b { u32::MAX } else { 0 };
        Self { regs: [R::mask_from_bits(bits); N] }
    }

    #[inline]
    fn from_bools(bits: &[bool]) -> Self {
        let bits = &bits[..Self::LANES];
        let mut regs = [R::mask_from_bits(0); N];
        for (k, reg) in regs.iter_mut().enumerate() {
            let chunk = &bits[k * R::LANES..(k + 1) * R::LANES];
            let packed = chunk
                .iter()
                .enumerate()
                .fold(0u32, |acc, (i, &b)| acc | (b as u32) << i);
            *reg = R::mask_from_bits(packed);
        }
        Self { regs }
    }

    #[inline]
    fn bitmask(self) -> u32 {
        let mut out = 0;
        for k in 0..N {
            out |= R::mask_bits(self.regs[k]) << (k * R::LANES);
        }
        out
    }

    #[inline(always)]
    fn and(self, o: Self) -> Self {
        let mut regs = self.regs;
        for k in 0..N {
            regs[k] = R::mask_and(self.regs[k], o.regs[k]);
        }
        Self { regs }
    }

    #[inline(always)]
    fn or(self, o: Self) -> Self {
        let mut regs = self.regs;
        for k in 0..N {
            regs[k] = R::mask_or(self.regs[k], o.regs[k]);
        }
        Self { regs }
    }

    #[inline(always)]
    fn not(self) -> Self {
        let mut regs = self.regs;
        for r in &mut regs {
            *r = R::mask_not(*r);
        }
        Self { regs }
    }
}

impl<R: Reg, const N: usize> Pack for Wide<R, N> {
    type Elem = R::Elem;
    type Mask = WideMask<R, N>;
    const LANES: usize = {
        assert!(N * R::LANES <= MAX_LANES);
        N * R::LANES
    };
    const BACKEND: Backend = Backend::WideNative;

    #[inline(always)]
    fn splat(x: R::Elem) -> Self {
        Self { regs: [R::splat(x); N] }
    }

    #[inline(always)]
    fn from_slice(s: &[R::Elem]) -> Self {
        let s = &s[..Self::LANES];
        let mut regs = [R::splat(R::Elem::ZERO); N];
        for (k, reg) in regs.iter_mut().enumerate() {
            // SAFETY: `s` holds N * R::LANES elements.
            *reg = unsafe { R::load(s.as_ptr().add(k * R::LANES)) };
        }
        Self { regs }
    }

    #[inline(always)]
    fn write_to_slice(self, s: &mut [R::Elem]) {
        let s = &mut s[..Self::LANES];
        for k in 0..N {
            // SAFETY: `s` holds N * R::LANES elements.
            unsafe { self.regs[k].store(s.as_mut_ptr().add(k * R::LANES)) };
        }
    }

    #[inline(always)]
    fn min(self, o: Self) -> Self {
        self.map2(o, R::min)
    }

    #[inline(always)]
    fn max(self, o: Self) -> Self {
        self.map2(o, R::max)
    }

    #[inline(always)]
    fn cmp_lt(self, o: Self) -> Self::Mask {
        self.cmp(o, R::lt)
    }

    #[inline(always)]
    fn cmp_le(self, o: Self) -> Self::Mask {
        self.cmp(o, R::le)
    }

    #[inline(always)]
    fn cmp_gt(self, o: Self) -> Self::Mask {
        self.cmp(o, R::gt)
    }

    #[inline(always)]
    fn cmp_ge(self, o: Self) -> Self::Mask {
        self.cmp(o, R::ge)
    }

    #[inline(always)]
    fn cmp_eq(self, o: Self) -> Self::Mask {
        self.cmp(o, R::eq)
    }

    #[inline(always)]
    fn select(m: Self::Mask, a: Self, b: Self) -> Self {
        let mut regs = b.regs;
        for k in 0..N {
            regs[k] = R::blend(m.regs[k], a.regs[k], b.regs[k]);
        }
        Self { regs }
    }
}

impl<R: Reg, const N: usize> Add for Wide<R, N> {
    type Output = Self;
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        self.map2(o, R::add)
    }
}

impl<R: Reg, const N: usize> Sub for Wide<R, N> {
    type Output = Self;
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        self.map2(o, R::sub)
    }
}

impl<R: FloatReg, const N: usize> Mul for Wide<R, N>
where
    R::Elem: Float,
{
    type Output = Self;
    #[inline(always)]
    fn mul(self, o: Self) -> Self {
        self.map2(o, R::mul)
    }
}

impl<R: FloatReg, const N: usize> Div for Wide<R, N>
where
    R::Elem: Float,
{
    type Output = Self;
    #[inline(always)]
    fn div(self, o: Self) -> Self {
        self.map2(o, R::div)
    }
}

impl<R: FloatReg, const N: usize> Neg for Wide<R, N>
where
    R::Elem: Float,
{
    type Output = Self;
    #[inline(always)]
    fn neg(self) -> Self {
        self.map1(R::neg)
    }
}

impl<R: FloatReg, const N: usize> FloatPack for Wide<R, N>
where
    R::Elem: Float,
{
    type Scalar = R::Elem;

    #[inline(always)]
    fn sqrt(self) -> Self {
        self.map1(R::sqrt)
    }

    #[inline(always)]
    fn abs(self) -> Self {
        self.map1(R::abs)
    }

    #[inline(always)]
    fn copysign(self, sign: Self) -> Self {
        self.map2(sign, R::copysign)
    }

    #[inline(always)]
    fn mul_add(self, b: Self, c: Self) -> Self {
        let mut regs = self.regs;
        for k in 0..N {
            regs[k] = self.regs[k].fma(b.regs[k], c.regs[k]);
        }
        Self { regs }
    }
}

// Width aliases. Each resolves to the widest register the build target
// enables; narrower-than-register widths use plain lanes.

pub type F64x1 = Wide<f64, 1>;
#[cfg(target_arch = "x86_64")]
pub type F64x2 = Wide<std::arch::x86_64::__m128d, 1>;
#[cfg(all(target_arch = "x86_64", not(target_feature = "avx")))]
pub type F64x4 = Wide<std::arch::x86_64::__m128d, 2>;
#[cfg(all(target_arch = "x86_64", target_feature = "avx"))]
pub type F64x4 = Wide<std::arch::x86_64::__m256d, 1>;
#[cfg(all(target_arch = "x86_64", not(target_feature = "avx")))]
pub type F64x8 = Wide<std::arch::x86_64::__m128d, 4>;
#[cfg(all(target_arch = "x86_64", target_feature = "avx"))]
pub type F64x8 = Wide<std::arch::x86_64::__m256d, 2>;

pub type F32x1 = Wide<f32, 1>;
pub type F32x2 = Wide<f32, 2>;
#[cfg(target_arch = "x86_64")]
pub type F32x4 = Wide<std::arch::x86_64::__m128, 1>;
#[cfg(all(target_arch = "x86_64", not(target_feature = "avx")))]
pub type F32x8 = Wide<std::arch::x86_64::__m128, 2>;
#[cfg(all(target_arch = "x86_64", target_feature = "avx"))]
pub type F32x8 = Wide<std::arch::x86_64::__m256, 1>;

pub type I32x1 = Wide<i32, 1>;
pub type I32x2 = Wide<i32, 2>;
#[cfg(target_arch = "x86_64")]
pub type I32x4 = Wide<std::arch::x86_64::__m128i, 1>;
#[cfg(all(target_arch = "x86_64", not(target_feature = "avx2")))]
pub type I32x8 = Wide<std::arch::x86_64::__m128i, 2>;
#[cfg(all(target_arch = "x86_64", target_feature = "avx2"))]
pub type I32x8 = Wide<std::arch::x86_64::__m256i, 1>;

#[cfg(not(target_arch = "x86_64"))]
pub type F64x2 = Wide<f64, 2>;
#[cfg(not(target_arch = "x86_64"))]
pub type F64x4 = Wide<f64, 4>;
#[cfg(not(target_arch = "x86_64"))]
pub type F64x8 = Wide<f64, 8>;
#[cfg(not(target_arch = "x86_64"))]
pub type F32x4 = Wide<f32, 4>;
#[cfg(not(target_arch = "x86_64"))]
pub type F32x8 = Wide<f32, 8>;
#[cfg(not(target_arch = "x86_64"))]
pub type I32x4 = Wide<i32, 4>;
#[cfg(not(target_arch = "x86_64"))]
pub type I32x8 = Wide<i32, 8>;

/// Lane count of the widest native f64 register this build targets.
pub const NATIVE_F64_LANES: usize = if cfg!(all(target_arch = "x86_64", target_feature = "avx")) {
    4
} else if cfg!(target_arch = "x86_64") {
    2
} else {
    1
};
