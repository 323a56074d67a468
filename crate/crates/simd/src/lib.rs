//! Portable fixed-width lane packs.
//!
//! Kernels are written once against the [`Pack`] / [`FloatPack`] traits and
//! instantiated with either the scalar reference backend ([`ScalarPack`]) or
//! a wide backend built from native vector registers ([`F64x4`] and friends).
//! Both backends produce bit-identical results for every operation:
//!
//! - horizontal sums accumulate strictly from lane 0 upwards;
//! - `min`/`max` return the non-NaN operand when exactly one side is NaN
//!   (more precisely: the first operand when the second is NaN);
//! - `mul_add` rounds once.
//!
//! [`LanePack`] wraps all of this behind a run-time [`PackConfig`] for tools
//! that pick the width from the command line.

pub mod config;
pub mod count;
pub mod dynamic;
pub mod element;
pub mod error;
pub mod pack;
pub mod scalar;
pub mod wide;

pub use config::{PackConfig, SimdChoice, SUPPORTED_WIDTHS};
pub use count::CountingPack;
pub use dynamic::{BinaryOp, CompareOp, LaneMask, LanePack, ReduceOp, Scalar, Stored, UnaryOp};
pub use element::{Element, ElementKind, Float};
pub use error::SimdError;
pub use pack::{Backend, FloatPack, Mask, Pack, MAX_LANES};
pub use scalar::{ScalarMask, ScalarPack};
pub use wide::{
    Wide, WideMask, F32x1, F32x2, F32x4, F32x8, F64x1, F64x2, F64x4, F64x8, I32x1, I32x2, I32x4,
    I32x8, NATIVE_F64_LANES,
};
