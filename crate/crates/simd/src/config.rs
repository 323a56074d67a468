//! Run-time description of a pack: element kind, width and backend.

use std::fmt;
use std::str::FromStr;

use crate::element::ElementKind;
use crate::error::SimdError;
use crate::pack::Backend;
use crate::wide::NATIVE_F64_LANES;

/// Widths every backend supports.
pub const SUPPORTED_WIDTHS: [usize; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackConfig {
    pub element_kind: ElementKind,
    pub width: usize,
    pub backend: Backend,
}

impl PackConfig {
    pub fn new(element_kind: ElementKind, width: usize, backend: Backend) -> Result<Self, SimdError> {
        if !SUPPORTED_WIDTHS.contains(&width) {
            return Err(SimdError::UnsupportedWidth(width));
        }
        Ok(Self { element_kind, width, backend })
    }

    pub fn scalar(element_kind: ElementKind, width: usize) -> Result<Self, SimdError> {
        Self::new(element_kind, width, Backend::ScalarReference)
    }

    pub fn wide(element_kind: ElementKind, width: usize) -> Result<Self, SimdError> {
        Self::new(element_kind, width, Backend::WideNative)
    }

    pub fn validate(&self) -> Result<(), SimdError> {
        Self::new(self.element_kind, self.width, self.backend).map(|_| ())
    }
}

impl fmt::Display for PackConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} ({})", self.element_kind, self.width, self.backend)
    }
}

/// What the user asked for on the command line.
///
/// `Scalar` is the reference backend at width 1; the `W*` variants use the
/// wide backend at a fixed width; `Native` resolves to the widest f64
/// register the build targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimdChoice {
    Scalar,
    W2,
    W4,
    W8,
    Native,
}

impl SimdChoice {
    pub fn width(self) -> usize {
        match self {
            SimdChoice::Scalar => 1,
            SimdChoice::W2 => 2,
            SimdChoice::W4 => 4,
            SimdChoice::W8 => 8,
            SimdChoice::Native => NATIVE_F64_LANES,
        }
    }

    pub fn backend(self) -> Backend {
        match self {
            SimdChoice::Scalar => Backend::ScalarReference,
            _ => Backend::WideNative,
        }
    }

    pub fn f64_config(self) -> PackConfig {
        PackConfig { element_kind: ElementKind::F64, width: self.width(), backend: self.backend() }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SimdChoice::Scalar => "scalar",
            SimdChoice::W2 => "w2",
            SimdChoice::W4 => "w4",
            SimdChoice::W8 => "w8",
            SimdChoice::Native => "native",
        }
    }
}

impl fmt::Display for SimdChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SimdChoice {
    type Err = SimdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "scalar" => Ok(SimdChoice::Scalar),
            "w2" => Ok(SimdChoice::W2),
            "w4" => Ok(SimdChoice::W4),
            "w8" => Ok(SimdChoice::W8),
            "native" => Ok(SimdChoice::Native),
            _ => Err(SimdError::UnknownSelection(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn widths_are_validated() {
        for w in SUPPORTED_WIDTHS {
            assert!(PackConfig::scalar(ElementKind::I32, w).is_ok());
        }
        assert_eq!(PackConfig::wide(ElementKind::F64, 3), Err(SimdError::UnsupportedWidth(3)));
        assert_eq!(PackConfig::wide(ElementKind::F64, 16), Err(SimdError::UnsupportedWidth(16)));
        assert_eq!(PackConfig::wide(ElementKind::F64, 0), Err(SimdError::UnsupportedWidth(0)));
    }

    #[test]
    fn choice_parsing() {
        assert_eq!("W4".parse::<SimdChoice>().unwrap(), SimdChoice::W4);
        assert_eq!("scalar".parse::<SimdChoice>().unwrap().width(), 1);
        assert!("w16".parse::<SimdChoice>().is_err());
        let n = SimdChoice::Native.width();
        assert!(SUPPORTED_WIDTHS.contains(&n));
    }
}
