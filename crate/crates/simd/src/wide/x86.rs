//! x86_64 registers: SSE2 always, AVX/AVX2/FMA when the build enables them.
//!
//! Every operation reproduces the per-lane rules in `element.rs` bit for bit.
//! `minpd`/`maxpd` return the second operand when either input is NaN, so a
//! fix-up blend restores the first operand where the second one is NaN.

use std::arch::x86_64::*;

use super::{FloatReg, Reg};

#[inline(always)]
fn bit(bits: u32, i: u32) -> i32 {
    -(((bits >> i) & 1) as i32)
}

#[inline(always)]
fn bit64(bits: u32, i: u32) -> i64 {
    -(((bits >> i) & 1) as i64)
}

// ---------------------------------------------------------------------------
// SSE2 f64x2
// ---------------------------------------------------------------------------

// SAFETY: SSE2 is part of the x86_64 baseline; loads/stores touch 2 lanes.
unsafe impl Reg for __m128d {
    type Elem = f64;
    type MaskReg = __m128d;
    const LANES: usize = 2;

    #[inline(always)]
    unsafe fn load(ptr: *const f64) -> Self {
        _mm_loadu_pd(ptr)
    }
    #[inline(always)]
    unsafe fn store(self, ptr: *mut f64) {
        _mm_storeu_pd(ptr, self)
    }
    #[inline(always)]
    fn splat(x: f64) -> Self {
        unsafe { _mm_set1_pd(x) }
    }
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        unsafe { _mm_add_pd(self, o) }
    }
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        unsafe { _mm_sub_pd(self, o) }
    }
    #[inline(always)]
    fn min(self, o: Self) -> Self {
        unsafe { Self::blend(_mm_cmpunord_pd(o, o), self, _mm_min_pd(self, o)) }
    }
    #[inline(always)]
    fn max(self, o: Self) -> Self {
        unsafe { Self::blend(_mm_cmpunord_pd(o, o), self, _mm_max_pd(self, o)) }
    }
    #[inline(always)]
    fn lt(self, o: Self) -> Self {
        unsafe { _mm_cmplt_pd(self, o) }
    }
    #[inline(always)]
    fn le(self, o: Self) -> Self {
        unsafe { _mm_cmple_pd(self, o) }
    }
    #[inline(always)]
    fn gt(self, o: Self) -> Self {
        unsafe { _mm_cmpgt_pd(self, o) }
    }
    #[inline(always)]
    fn ge(self, o: Self) -> Self {
        unsafe { _mm_cmpge_pd(self, o) }
    }
    #[inline(always)]
    fn eq(self, o: Self) -> Self {
        unsafe { _mm_cmpeq_pd(self, o) }
    }
    #[inline(always)]
    fn blend(m: Self, a: Self, b: Self) -> Self {
        unsafe { _mm_or_pd(_mm_and_pd(m, a), _mm_andnot_pd(m, b)) }
    }
    #[inline(always)]
    fn mask_bits(m: Self) -> u32 {
        unsafe { _mm_movemask_pd(m) as u32 }
    }
    #[inline(always)]
    fn mask_from_bits(bits: u32) -> Self {
        unsafe { _mm_castsi128_pd(_mm_set_epi64x(bit64(bits, 1), bit64(bits, 0))) }
    }
    #[inline(always)]
    fn mask_and(a: Self, b: Self) -> Self {
        unsafe { _mm_and_pd(a, b) }
    }
    #[inline(always)]
    fn mask_or(a: Self, b: Self) -> Self {
        unsafe { _mm_or_pd(a, b) }
    }
    #[inline(always)]
    fn mask_not(a: Self) -> Self {
        unsafe { _mm_xor_pd(a, _mm_castsi128_pd(_mm_set1_epi32(-1))) }
    }
}

impl FloatReg for __m128d {
    #[inline(always)]
    fn mul(self, o: Self) -> Self {
        unsafe { _mm_mul_pd(self, o) }
    }
    #[inline(always)]
    fn div(self, o: Self) -> Self {
        unsafe { _mm_div_pd(self, o) }
    }
    #[inline(always)]
    fn sqrt(self) -> Self {
        unsafe { _mm_sqrt_pd(self) }
    }
    #[inline(always)]
    fn neg(self) -> Self {
        unsafe { _mm_xor_pd(self, _mm_set1_pd(-0.0)) }
    }
    #[inline(always)]
    fn abs(self) -> Self {
        unsafe { _mm_andnot_pd(_mm_set1_pd(-0.0), self) }
    }
    #[inline(always)]
    fn copysign(self, sign: Self) -> Self {
        unsafe {
            let s = _mm_set1_pd(-0.0);
            _mm_or_pd(_mm_andnot_pd(s, self), _mm_and_pd(s, sign))
        }
    }
    #[inline(always)]
    fn fma(self, b: Self, c: Self) -> Self {
        #[cfg(target_feature = "fma")]
        unsafe {
            _mm_fmadd_pd(self, b, c)
        }
        #[cfg(not(target_feature = "fma"))]
        unsafe {
            let (mut x, mut y, mut z) = ([0.0f64; 2], [0.0f64; 2], [0.0f64; 2]);
            _mm_storeu_pd(x.as_mut_ptr(), self);
            _mm_storeu_pd(y.as_mut_ptr(), b);
            _mm_storeu_pd(z.as_mut_ptr(), c);
            for i in 0..2 {
                x[i] = x[i].mul_add(y[i], z[i]);
            }
            _mm_loadu_pd(x.as_ptr())
        }
    }
}

// ---------------------------------------------------------------------------
// SSE f32x4
// ---------------------------------------------------------------------------

// SAFETY: SSE is part of the x86_64 baseline; loads/stores touch 4 lanes.
unsafe impl Reg for __m128 {
    type Elem = f32;
    type MaskReg = __m128;
    const LANES: usize = 4;

    #[inline(always)]
    unsafe fn load(ptr: *const f32) -> Self {
        _mm_loadu_ps(ptr)
    }
    #[inline(always)]
    unsafe fn store(self, ptr: *mut f32) {
        _mm_storeu_ps(ptr, self)
    }
    #[inline(always)]
    fn splat(x: f32) -> Self {
        unsafe { _mm_set1_ps(x) }
    }
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        unsafe { _mm_add_ps(self, o) }
    }
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        unsafe { _mm_sub_ps(self, o) }
    }
    #[inline(always)]
    fn min(self, o: Self) -> Self {
        unsafe { Self::blend(_mm_cmpunord_ps(o, o), self, _mm_min_ps(self, o)) }
    }
    #[inline(always)]
    fn max(self, o: Self) -> Self {
        unsafe { Self::blend(_mm_cmpunord_ps(o, o), self, _mm_max_ps(self, o)) }
    }
    #[inline(always)]
    fn lt(self, o: Self) -> Self {
        unsafe { _mm_cmplt_ps(self, o) }
    }
    #[inline(always)]
    fn le(self, o: Self) -> Self {
        unsafe { _mm_cmple_ps(self, o) }
    }
    #[inline(always)]
    fn gt(self, o: Self) -> Self {
        unsafe { _mm_cmpgt_ps(self, o) }
    }
    #[inline(always)]
    fn ge(self, o: Self) -> Self {
        unsafe { _mm_cmpge_ps(self, o) }
    }
    #[inline(always)]
    fn eq(self, o: Self) -> Self {
        unsafe { _mm_cmpeq_ps(self, o) }
    }
    #[inline(always)]
    fn blend(m: Self, a: Self, b: Self) -> Self {
        unsafe { _mm_or_ps(_mm_and_ps(m, a), _mm_andnot_ps(m, b)) }
    }
    #[inline(always)]
    fn mask_bits(m: Self) -> u32 {
        unsafe { _mm_movemask_ps(m) as u32 }
    }
    #[inline(always)]
    fn mask_from_bits(bits: u32) -> Self {
        unsafe {
            _mm_castsi128_ps(_mm_set_epi32(
                bit(bits, 3),
                bit(bits, 2),
                bit(bits, 1),
                bit(bits, 0),
            ))
        }
    }
    #[inline(always)]
    fn mask_and(a: Self, b: Self) -> Self {
        unsafe { _mm_and_ps(a, b) }
    }
    #[inline(always)]
    fn mask_or(a: Self, b: Self) -> Self {
        unsafe { _mm_or_ps(a, b) }
    }
    #[inline(always)]
    fn mask_not(a: Self) -> Self {
        unsafe { _mm_xor_ps(a, _mm_castsi128_ps(_mm_set1_epi32(-1))) }
    }
}

impl FloatReg for __m128 {
    #[inline(always)]
    fn mul(self, o: Self) -> Self {
        unsafe { _mm_mul_ps(self, o) }
    }
    #[inline(always)]
    fn div(self, o: Self) -> Self {
        unsafe { _mm_div_ps(self, o) }
    }
    #[inline(always)]
    fn sqrt(self) -> Self {
        unsafe { _mm_sqrt_ps(self) }
    }
    #[inline(always)]
    fn neg(self) -> Self {
        unsafe { _mm_xor_ps(self, _mm_set1_ps(-0.0)) }
    }
    #[inline(always)]
    fn abs(self) -> Self {
        unsafe { _mm_andnot_ps(_mm_set1_ps(-0.0), self) }
    }
    #[inline(always)]
    fn copysign(self, sign: Self) -> Self {
        unsafe {
            let s = _mm_set1_ps(-0.0);
            _mm_or_ps(_mm_andnot_ps(s, self), _mm_and_ps(s, sign))
        }
    }
    #[inline(always)]
    fn fma(self, b: Self, c: Self) -> Self {
        #[cfg(target_feature = "fma")]
        unsafe {
            _mm_fmadd_ps(self, b, c)
        }
        #[cfg(not(target_feature = "fma"))]
        unsafe {
            let (mut x, mut y, mut z) = ([0.0f32; 4], [0.0f32; 4], [0.0f32; 4]);
            _mm_storeu_ps(x.as_mut_ptr(), self);
            _mm_storeu_ps(y.as_mut_ptr(), b);
            _mm_storeu_ps(z.as_mut_ptr(), c);
            for i in 0..4 {
                x[i] = x[i].mul_add(y[i], z[i]);
            }
            _mm_loadu_ps(x.as_ptr())
        }
    }
}

// ---------------------------------------------------------------------------
// SSE2 i32x4
// ---------------------------------------------------------------------------

// SAFETY: SSE2 is part of the x86_64 baseline; loads/stores touch 4 lanes.
unsafe impl Reg for __m128i {
    type Elem = i32;
    type MaskReg = __m128i;
    const LANES: usize = 4;

    #[inline(always)]
    unsafe fn load(ptr: *const i32) -> Self {
        _mm_loadu_si128(ptr as *const __m128i)
    }
    #[inline(always)]
    unsafe fn store(self, ptr: *mut i32) {
        _mm_storeu_si128(ptr as *mut __m128i, self)
    }
    #[inline(always)]
    fn splat(x: i32) -> Self {
        unsafe { _mm_set1_epi32(x) }
    }
    #[inline(always)]
    fn add(self, o: Self) -> Self {
        unsafe { _mm_add_epi32(self, o) }
    }
    #[inline(always)]
    fn sub(self, o: Self) -> Self {
        unsafe { _mm_sub_epi32(self, o) }
    }
    #[inline(always)]
    fn min(self, o: Self) -> Self {
        Self::blend(self.lt(o), self, o)
    }
    #[inline(always)]
    fn max(self, o: Self) -> Self {
        Self::blend(self.gt(o), self, o)
    }
    #[inline(always)]
    fn lt(self, o: Self) -> Self {
        unsafe { _mm_cmplt_epi32(self, o) }
    }
    #[inline(always)]
    fn le(self, o: Self) -> Self {
        Self::mask_not(self.gt(o))
    }
    #[inline(always)]
    fn gt(self, o: Self) -> Self {
        unsafe { _mm_cmpgt_epi32(self, o) }
    }
    #[inline(always)]
    fn ge(self, o: Self) -> Self {
        Self::mask_not(self.lt(o))
    }
    #[inline(always)]
    fn eq(self, o: Self) -> Self {
        unsafe { _mm_cmpeq_epi32(self, o) }
    }
    #[inline(always)]
    fn blend(m: Self, a: Self, b: Self) -> Self {
        unsafe { _mm_or_si128(_mm_and_si128(m, a), _mm_andnot_si128(m, b)) }
    }
    #[inline(always)]
    fn mask_bits(m: Self) -> u32 {
        unsafe { _mm_movemask_ps(_mm_castsi128_ps(m)) as u32 }
    }
    #[inline(always)]
    fn mask_from_bits(bits: u32) -> Self {
        unsafe { _mm_set_epi32(bit(bits, 3), bit(bits, 2), bit(bits, 1), bit(bits, 0)) }
    }
    #[inline(always)]
    fn mask_and(a: Self, b: Self) -> Self {
        unsafe { _mm_and_si128(a, b) }
    }
    #[inline(always)]
    fn mask_or(a: Self, b: Self) -> Self {
        unsafe { _mm_or_si128(a, b) }
    }
    #[inline(always)]
    fn mask_not(a: Self) -> Self {
        unsafe { _mm_xor_si128(a, _mm_set1_epi32(-1)) }
    }
}

// ---------------------------------------------------------------------------
// AVX f64x4 / f32x8
// ---------------------------------------------------------------------------

#[cfg(target_feature = "avx")]
mod avx {
    use std::arch::x86_64::*;

    use super::{bit, bit64, FloatReg, Reg};

    // SAFETY: compiled only with AVX enabled; loads/stores touch 4 lanes.
    unsafe impl Reg for __m256d {
        type Elem = f64;
        type MaskReg = __m256d;
        const LANES: usize = 4;

        #[inline(always)]
        unsafe fn load(ptr: *const f64) -> Self {
            _mm256_loadu_pd(ptr)
        }
        #[inline(always)]
        unsafe fn store(self, ptr: *mut f64) {
            _mm256_storeu_pd(ptr, self)
        }
        #[inline(always)]
        fn splat(x: f64) -> Self {
            unsafe { _mm256_set1_pd(x) }
        }
        #[inline(always)]
        fn add(self, o: Self) -> Self {
            unsafe { _mm256_add_pd(self, o) }
        }
        #[inline(always)]
        fn sub(self, o: Self) -> Self {
            unsafe { _mm256_sub_pd(self, o) }
        }
        #[inline(always)]
        fn min(self, o: Self) -> Self {
            unsafe {
                Self::blend(_mm256_cmp_pd::<_CMP_UNORD_Q>(o, o), self, _mm256_min_pd(self, o))
            }
        }
        #[inline(always)]
        fn max(self, o: Self) -> Self {
            unsafe {
                Self::blend(_mm256_cmp_pd::<_CMP_UNORD_Q>(o, o), self, _mm256_max_pd(self, o))
            }
        }
        #[inline(always)]
        fn lt(self, o: Self) -> Self {
            unsafe { _mm256_cmp_pd::<_CMP_LT_OQ>(self, o) }
        }
        #[inline(always)]
        fn le(self, o: Self) -> Self {
            unsafe { _mm256_cmp_pd::<_CMP_LE_OQ>(self, o) }
        }
        #[inline(always)]
        fn gt(self, o: Self) -> Self {
            unsafe { _mm256_cmp_pd::<_CMP_GT_OQ>(self, o) }
        }
        #[inline(always)]
        fn ge(self, o: Self) -> Self {
            unsafe { _mm256_cmp_pd::<_CMP_GE_OQ>(self, o) }
        }
        #[inline(always)]
        fn eq(self, o: Self) -> Self {
            unsafe { _mm256_cmp_pd::<_CMP_EQ_OQ>(self, o) }
        }
        #[inline(always)]
        fn blend(m: Self, a: Self, b: Self) -> Self {
            unsafe { _mm256_blendv_pd(b, a, m) }
        }
        #[inline(always)]
        fn mask_bits(m: Self) -> u32 {
            unsafe { _mm256_movemask_pd(m) as u32 }
        }
        #[inline(always)]
        fn mask_from_bits(bits: u32) -> Self {
            unsafe {
                _mm256_castsi256_pd(_mm256_set_epi64x(
                    bit64(bits, 3),
                    bit64(bits, 2),
                    bit64(bits, 1),
                    bit64(bits, 0),
                ))
            }
        }
        #[inline(always)]
        fn mask_and(a: Self, b: Self) -> Self {
            unsafe { _mm256_and_pd(a, b) }
        }
        #[inline(always)]
        fn mask_or(a: Self, b: Self) -> Self {
            unsafe { _mm256_or_pd(a, b) }
        }
        #[inline(always)]
        fn mask_not(a: Self) -> Self {
            unsafe { _mm256_xor_pd(a, _mm256_castsi256_pd(_mm256_set1_epi32(-1))) }
        }
    }

    impl FloatReg for __m256d {
        #[inline(always)]
        fn mul(self, o: Self) -> Self {
            unsafe { _mm256_mul_pd(self, o) }
        }
        #[inline(always)]
        fn div(self, o: Self) -> Self {
            unsafe { _mm256_div_pd(self, o) }
        }
        #[inline(always)]
        fn sqrt(self) -> Self {
            unsafe { _mm256_sqrt_pd(self) }
        }
        #[inline(always)]
        fn neg(self) -> Self {
            unsafe { _mm256_xor_pd(self, _mm256_set1_pd(-0.0)) }
        }
        #[inline(always)]
        fn abs(self) -> Self {
            unsafe { _mm256_andnot_pd(_mm256_set1_pd(-0.0), self) }
        }
        #[inline(always)]
        fn copysign(self, sign: Self) -> Self {
            unsafe {
                let s = _mm256_set1_pd(-0.0);
                _mm256_or_pd(_mm256_andnot_pd(s, self), _mm256_and_pd(s, sign))
            }
        }
        #[inline(always)]
        fn fma(self, b: Self, c: Self) -> Self {
            #[cfg(target_feature = "fma")]
            unsafe {
                _mm256_fmadd_pd(self, b, c)
            }
            #[cfg(not(target_feature = "fma"))]
            unsafe {
                let (mut x, mut y, mut z) = ([0.0f64; 4], [0.0f64; 4], [0.0f64; 4]);
                _mm256_storeu_pd(x.as_mut_ptr(), self);
                _mm256_storeu_pd(y.as_mut_ptr(), b);
                _mm256_storeu_pd(z.as_mut_ptr(), c);
                for i in 0..4 {
                    x[i] = x[i].mul_add(y[i], z[i]);
                }
                _mm256_loadu_pd(x.as_ptr())
            }
        }
    }

    // SAFETY: compiled only with AVX enabled; loads/stores touch 8 lanes.
    unsafe impl Reg for __m256 {
        type Elem = f32;
        type MaskReg = __m256;
        const LANES: usize = 8;

        #[inline(always)]
        unsafe fn load(ptr: *const f32) -> Self {
            _mm256_loadu_ps(ptr)
        }
        #[inline(always)]
        unsafe fn store(self, ptr: *mut f32) {
            _mm256_storeu_ps(ptr, self)
        }
        #[inline(always)]
        fn splat(x: f32) -> Self {
            unsafe { _mm256_set1_ps(x) }
        }
        #[inline(always)]
        fn add(self, o: Self) -> Self {
            unsafe { _mm256_add_ps(self, o) }
        }
        #[inline(always)]
        fn sub(self, o: Self) -> Self {
            unsafe { _mm256_sub_ps(self, o) }
        }
        #[inline(always)]
        fn min(self, o: Self) -> Self {
            unsafe {
                Self::blend(_mm256_cmp_ps::<_CMP_UNORD_Q>(o, o), self, _mm256_min_ps(self, o))
            }
        }
        #[inline(always)]
        fn max(self, o: Self) -> Self {
            unsafe {
                Self::blend(_mm256_cmp_ps::<_CMP_UNORD_Q>(o, o), self, _mm256_max_ps(self, o))
            }
        }
        #[inline(always)]
        fn lt(self, o: Self) -> Self {
            unsafe { _mm256_cmp_ps::<_CMP_LT_OQ>(self, o) }
        }
        #[inline(always)]
        fn le(self, o: Self) -> Self {
            unsafe { _mm256_cmp_ps::<_CMP_LE_OQ>(self, o) }
        }
        #[inline(always)]
        fn gt(self, o: Self) -> Self {
            unsafe { _mm256_cmp_ps::<_CMP_GT_OQ>(self, o) }
        }
        #[inline(always)]
        fn ge(self, o: Self) -> Self {
            unsafe { _mm256_cmp_ps::<_CMP_GE_OQ>(self, o) }
        }
        #[inline(always)]
        fn eq(self, o: Self) -> Self {
            unsafe { _mm256_cmp_ps::<_CMP_EQ_OQ>(self, o) }
        }
        #[inline(always)]
        fn blend(m: Self, a: Self, b: Self) -> Self {
            unsafe { _mm256_blendv_ps(b, a, m) }
        }
        #[inline(always)]
        fn mask_bits(m: Self) -> u32 {
            unsafe { _mm256_movemask_ps(m) as u32 }
        }
        #[inline(always)]
        fn mask_from_bits(bits: u32) -> Self {
            unsafe {
                _mm256_castsi256_ps(_mm256_set_epi32(
                    bit(bits, 7),
                    bit(bits, 6),
                    bit(bits, 5),
                    bit(bits, 4),
                    bit(bits, 3),
                    bit(bits, 2),
                    bit(bits, 1),
                    bit(bits, 0),
                ))
            }
        }
        #[inline(always)]
        fn mask_and(a: Self, b: Self) -> Self {
            unsafe { _mm256_and_ps(a, b) }
        }
        #[inline(always)]
        fn mask_or(a: Self, b: Self) -> Self {
            unsafe { _mm256_or_ps(a, b) }
        }
        #[inline(always)]
        fn mask_not(a: Self) -> Self {
            unsafe { _mm256_xor_ps(a, _mm256_castsi256_ps(_mm256_set1_epi32(-1))) }
        }
    }

    impl FloatReg for __m256 {
        #[inline(always)]
        fn mul(self, o: Self) -> Self {
            unsafe { _mm256_mul_ps(self, o) }
        }
        #[inline(always)]
        fn div(self, o: Self) -> Self {
            unsafe { _mm256_div_ps(self, o) }
        }
        #[inline(always)]
        fn sqrt(self) -> Self {
            unsafe { _mm256_sqrt_ps(self) }
        }
        #[inline(always)]
        fn neg(self) -> Self {
            unsafe { _mm256_xor_ps(self, _mm256_set1_ps(-0.0)) }
        }
        #[inline(always)]
        fn abs(self) -> Self {
            unsafe { _mm256_andnot_ps(_mm256_set1_ps(-0.0), self) }
        }
        #[inline(always)]
        fn copysign(self, sign: Self) -> Self {
            unsafe {
                let s = _mm256_set1_ps(-0.0);
                _mm256_or_ps(_mm256_andnot_ps(s, self), _mm256_and_ps(s, sign))
            }
        }
        #[inline(always)]
        fn fma(self, b: Self, c: Self) -> Self {
            #[cfg(target_feature = "fma")]
            unsafe {
                _mm256_fmadd_ps(self, b, c)
            }
            #[cfg(not(target_feature = "fma"))]
            unsafe {
                let (mut x, mut y, mut z) = ([0.0f32; 8], [0.0f32; 8], [0.0f32; 8]);
                _mm256_storeu_ps(x.as_mut_ptr(), self);
                _mm256_storeu_ps(y.as_mut_ptr(), b);
                _mm256_storeu_ps(z.as_mut_ptr(), c);
                for i in 0..8 {
                    x[i] = x[i].mul_add(y[i], z[i]);
                }
                _mm256_loadu_ps(x.as_ptr())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// AVX2 i32x8
// ---------------------------------------------------------------------------

#[cfg(target_feature = "avx2")]
mod avx2 {
    use std::arch::x86_64::*;

    use super::{bit, Reg};

    // SAFETY: compiled only with AVX2 enabled; loads/stores touch 8 lanes.
    unsafe impl Reg for __m256i {
        type Elem = i32;
        type MaskReg = __m256i;
        const LANES: usize = 8;

        #[inline(always)]
        unsafe fn load(ptr: *const i32) -> Self {
            _mm256_loadu_si256(ptr as *const __m256i)
        }
        #[inline(always)]
        unsafe fn store(self, ptr: *mut i32) {
            _mm256_storeu_si256(ptr as *mut __m256i, self)
        }
        #[inline(always)]
        fn splat(x: i32) -> Self {
            unsafe { _mm256_set1_epi32(x) }
        }
        #[inline(always)]
        fn add(self, o: Self) -> Self {
            unsafe { _mm256_add_epi32(self, o) }
        }
        #[inline(always)]
        fn sub(self, o: Self) -> Self {
            unsafe { _mm256_sub_epi32(self, o) }
        }
        #[inline(always)]
        fn min(self, o: Self) -> Self {
            unsafe { _mm256_min_epi32(self, o) }
        }
        #[inline(always)]
        fn max(self, o: Self) -> Self {
            unsafe { _mm256_max_epi32(self, o) }
        }
        #[inline(always)]
        fn lt(self, o: Self) -> Self {
            unsafe { _mm256_cmpgt_epi32(o, self) }
        }
        #[inline(always)]
        fn le(self, o: Self) -> Self {
            Self::mask_not(self.gt(o))
        }
        #[inline(always)]
        fn gt(self, o: Self) -> Self {
            unsafe { _mm256_cmpgt_epi32(self, o) }
        }
        #[inline(always)]
        fn ge(self, o: Self) -> Self {
            Self::mask_not(self.lt(o))
        }
        #[inline(always)]
        fn eq(self, o: Self) -> Self {
            unsafe { _mm256_cmpeq_epi32(self, o) }
        }
        #[inline(always)]
        fn blend(m: Self, a: Self, b: Self) -> Self {
            unsafe { _mm256_blendv_epi8(b, a, m) }
        }
        #[inline(always)]
        fn mask_bits(m: Self) -> u32 {
            unsafe { _mm256_movemask_ps(_mm256_castsi256_ps(m)) as u32 }
        }
        #[inline(always)]
        fn mask_from_bits(bits: u32) -> Self {
            unsafe {
                _mm256_set_epi32(
                    bit(bits, 7),
                    bit(bits, 6),
                    bit(bits, 5),
                    bit(bits, 4),
                    bit(bits, 3),
                    bit(bits, 2),
                    bit(bits, 1),
                    bit(bits, 0),
                )
            }
        }
        #[inline(always)]
        fn mask_and(a: Self, b: Self) -> Self {
            unsafe { _mm256_and_si256(a, b) }
        }
        #[inline(always)]
        fn mask_or(a: Self, b: Self) -> Self {
            unsafe { _mm256_or_si256(a, b) }
        }
        #[inline(always)]
        fn mask_not(a: Self) -> Self {
            unsafe { _mm256_xor_si256(a, _mm256_set1_epi32(-1)) }
        }
    }
}
