use thiserror::Error;

use crate::config::PackConfig;
use crate::element::ElementKind;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimdError {
    #[error("access of {width} lanes at offset {offset} exceeds buffer of length {len}")]
    OutOfBounds { offset: usize, width: usize, len: usize },

    #[error("operands have different configurations: {left} vs {right}")]
    ConfigMismatch { left: PackConfig, right: PackConfig },

    #[error("width {0} is not one of 1, 2, 4, 8")]
    UnsupportedWidth(usize),

    #[error("operation `{op}` is not defined for {kind} packs")]
    UnsupportedOp { op: &'static str, kind: ElementKind },

    #[error("expected {expected} lanes, got {got}")]
    LaneCount { expected: usize, got: usize },

    #[error("element kind mismatch: pack holds {expected}, value is {got}")]
    KindMismatch { expected: ElementKind, got: ElementKind },

    #[error("unknown SIMD selection `{0}` (expected scalar, w2, w4, w8 or native)")]
    UnknownSelection(String),
}
