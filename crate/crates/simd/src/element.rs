//! Lane element types and their scalar semantics.
//!
//! Every backend must agree with the per-lane rules defined here. The scalar
//! reference backend calls them directly; wide backends reproduce them with
//! native instructions.

use std::fmt::Debug;

/// Element kinds a pack can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    F64,
    F32,
    I32,
}

impl ElementKind {
    pub fn is_float(self) -> bool {
        matches!(self, ElementKind::F64 | ElementKind::F32)
    }
}

impl std::fmt::Display for ElementKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ElementKind::F64 => "f64",
            ElementKind::F32 => "f32",
            ElementKind::I32 => "i32",
        })
    }
}

mod sealed {
    pub trait Sealed {}
    impl Sealed for f64 {}
    impl Sealed for f32 {}
    impl Sealed for i32 {}
}

/// A lane element. Sealed: only `f64`, `f32` and `i32`.
pub trait Element:
    sealed::Sealed + Copy + Default + PartialEq + PartialOrd + Debug + Send + Sync + 'static
{
    const KIND: ElementKind;
    const ZERO: Self;

    /// Raw bit pattern, zero-extended. Used for bit-exact comparisons.
    fn to_bits64(self) -> u64;

    fn lane_add(self, o: Self) -> Self;
    fn lane_sub(self, o: Self) -> Self;
    /// `self` if `self < o`, otherwise `o`, except that a NaN in `o` yields `self`.
    fn lane_min(self, o: Self) -> Self;
    /// `self` if `self > o`, otherwise `o`, except that a NaN in `o` yields `self`.
    fn lane_max(self, o: Self) -> Self;
}

/// Floating-point lane element.
pub trait Float: Element {
    fn lane_mul(self, o: Self) -> Self;
    fn lane_div(self, o: Self) -> Self;
    fn lane_sqrt(self) -> Self;
    fn lane_neg(self) -> Self;
    fn lane_abs(self) -> Self;
    fn lane_copysign(self, sign: Self) -> Self;
    /// `self * b + c` with a single rounding.
    fn lane_fma(self, b: Self, c: Self) -> Self;
    fn is_nan(self) -> bool;
}

macro_rules! float_element {
    ($t:ty, $kind:ident) => {
        impl Element for $t {
            const KIND: ElementKind = ElementKind::$kind;
            const ZERO: Self = 0.0;

            #[inline(always)]
            fn to_bits64(self) -> u64 {
                self.to_bits() as u64
            }
            #[inline(always)]
            fn lane_add(self, o: Self) -> Self {
                self + o
            }
            #[inline(always)]
            fn lane_sub(self, o: Self) -> Self {
                self - o
            }
            #[inline(always)]
            fn lane_min(self, o: Self) -> Self {
                if self < o || o.is_nan() {
                    self
                } else {
                    o
                }
            }
            #[inline(always)]
            fn lane_max(self, o: Self) -> Self {
                if self > o || o.is_nan() {
                    self
                } else {
                    o
                }
            }
        }

        impl Float for $t {
            #[inline(always)]
            fn lane_mul(self, o: Self) -> Self {
                self * o
            }
            #[inline(always)]
            fn lane_div(self, o: Self) -> Self {
                self / o
            }
            #[inline(always)]
            fn lane_sqrt(self) -> Self {
                self.sqrt()
            }
            #[inline(always)]
            fn lane_neg(self) -> Self {
                -self
            }
            #[inline(always)]
            fn lane_abs(self) -> Self {
                self.abs()
            }
            #[inline(always)]
            fn lane_copysign(self, sign: Self) -> Self {
                self.copysign(sign)
            }
            #[inline(always)]
            fn lane_fma(self, b: Self, c: Self) -> Self {
                self.mul_add(b, c)
            }
            #[inline(always)]
            fn is_nan(self) -> bool {
                <$t>::is_nan(self)
            }
        }
    };
}

float_element!(f64, F64);
float_element!(f32, F32);

impl Element for i32 {
    const KIND: ElementKind = ElementKind::I32;
    const ZERO: Self = 0;

    #[inline(always)]
    fn to_bits64(self) -> u64 {
        self as u32 as u64
    }
    #[inline(always)]
    fn lane_add(self, o: Self) -> Self {
        self.wrapping_add(o)
    }
    #[inline(always)]
    fn lane_sub(self, o: Self) -> Self {
        self.wrapping_sub(o)
    }
    #[inline(always)]
    fn lane_min(self, o: Self) -> Self {
        if self < o {
            self
        } else {
            o
        }
    }
    #[inline(always)]
    fn lane_max(self, o: Self) -> Self {
        if self > o {
            self
        } else {
            o
        }
    }
}
