//! Single-lane "registers" for widths below one native register and for
//! targets without a vector unit.

use super::{FloatReg, Reg};
use crate::element::{Element, Float};

macro_rules! lane_reg {
    ($t:ty) => {
        // SAFETY: loads and stores exactly one element.
        unsafe impl Reg for $t {
            type Elem = $t;
            type MaskReg = bool;
            const LANES: usize = 1;

            #[inline(always)]
            unsafe fn load(ptr: *const $t) -> Self {
                ptr.read()
            }
            #[inline(always)]
            unsafe fn store(self, ptr: *mut $t) {
                ptr.write(self)
            }
            #[inline(always)]
            fn splat(x: $t) -> Self {
                x
            }
            #[inline(always)]
            fn add(self, o: Self) -> Self {
                self.lane_add(o)
            }
            #[inline(always)]
            fn sub(self, o: Self) -> Self {
                self.lane_sub(o)
            }
            #[inline(always)]
            fn min(self, o: Self) -> Self {
                self.lane_min(o)
            }
            #[inline(always)]
            fn max(self, o: Self) -> Self {
                self.lane_max(o)
            }
            #[inline(always)]
            fn lt(self, o: Self) -> bool {
                self < o
            }
            #[inline(always)]
            fn le(self, o: Self) -> bool {
                self <= o
            }
            #[inline(always)]
            fn gt(self, o: Self) -> bool {
                self > o
            }
            #[inline(always)]
            fn ge(self, o: Self) -> bool {
                self >= o
            }
            #[inline(always)]
            fn eq(self, o: Self) -> bool {
                self == o
            }
            #[inline(always)]
            fn blend(m: bool, a: Self, b: Self) -> Self {
                if m {
                    a
                } else {
                    b
                }
            }
            #[inline(always)]
            fn mask_bits(m: bool) -> u32 {
                m as u32
            }
            #[inline(always)]
            fn mask_from_bits(bits: u32) -> bool {
                bits & 1 == 1
            }
            #[inline(always)]
            fn mask_and(a: bool, b: bool) -> bool {
                a & b
            }
            #[inline(always)]
            fn mask_or(a: bool, b: bool) -> bool {
                a | b
            }
            #[inline(always)]
            fn mask_not(a: bool) -> bool {
                !a
            }
        }
    };
}

lane_reg!(f64);
lane_reg!(f32);
lane_reg!(i32);

macro_rules! lane_float_reg {
    ($t:ty) => {
        impl FloatReg for $t {
            #[inline(always)]
            fn mul(self, o: Self) -> Self {
                self.lane_mul(o)
            }
            #[inline(always)]
            fn div(self, o: Self) -> Self {
                self.lane_div(o)
            }
            #[inline(always)]
            fn sqrt(self) -> Self {
                self.lane_sqrt()
            }
            #[inline(always)]
            fn neg(self) -> Self {
                self.lane_neg()
            }
            #[inline(always)]
            fn abs(self) -> Self {
                self.lane_abs()
            }
            #[inline(always)]
            fn copysign(self, sign: Self) -> Self {
                self.lane_copysign(sign)
            }
            #[inline(always)]
            fn fma(self, b: Self, c: Self) -> Self {
                self.lane_fma(b, c)
            }
        }
    };
}

lane_float_reg!(f64);
lane_float_reg!(f32);
