//! Width-generic compute kernels.
//!
//! Every kernel is written once against [`lanepack::FloatPack`] and
//! instantiated per width through [`Kernels`].

pub mod cost;
pub mod gravity;
pub mod hll;
pub mod hydro;
pub mod state;

use lanepack::{CountingPack, FloatPack, ScalarPack, SimdChoice, F64x2, F64x4, F64x8};

pub use cost::{KernelCostModel, StepShape};
pub use gravity::{Sources, GRAVITY_STRIDE};
pub use hydro::{Stage, StageInput};

use crate::error::Result;
use crate::mesh::SubGrid;

/// f64 packs usable by the kernels.
pub trait Lanes: FloatPack<Scalar = f64> {}
impl<T: FloatPack<Scalar = f64>> Lanes for T {}

type AdvanceFn = fn(&mut SubGrid, &mut [f64], &StageInput) -> Result<()>;
type DtFn = fn(&SubGrid, f64) -> Result<f64>;
type GravityFn = fn(&SubGrid, &Sources, &mut [f64]) -> u64;

/// Kernel entry points monomorphised for one pack type.
#[derive(Clone, Copy)]
pub struct Kernels {
    pub width: usize,
    pub name: &'static str,
    pub advance: AdvanceFn,
    pub dt: DtFn,
    pub gravity: GravityFn,
}

impl std::fmt::Debug for Kernels {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Kernels({} x{})", self.name, self.width)
    }
}

impl Kernels {
    pub fn of<P: Lanes>(name: &'static str) -> Kernels {
        Kernels {
            width: P::LANES,
            name,
            advance: hydro::advance_leaf::<P>,
            dt: hydro::leaf_dt::<P>,
            gravity: gravity::gravity_leaf::<P>,
        }
    }

    pub fn for_choice(c: SimdChoice) -> Kernels {
        match c {
            SimdChoice::Scalar => Self::of::<ScalarPack<f64, 1>>("scalar"),
            SimdChoice::W2 => Self::of::<F64x2>("wide"),
            SimdChoice::W4 => Self::of::<F64x4>("wide"),
            SimdChoice::W8 => Self::of::<F64x8>("wide"),
            SimdChoice::Native => match lanepack::NATIVE_F64_LANES {
                8 => Self::of::<F64x8>("wide"),
                4 => Self::of::<F64x4>("wide"),
                2 => Self::of::<F64x2>("wide"),
                _ => Self::of::<lanepack::F64x1>("wide"),
            },
        }
    }

    /// Scalar reference kernels that count their flops on the calling
    /// thread (see [`lanepack::count`]).
    pub fn counting() -> Kernels {
        Self::of::<CountingPack<ScalarPack<f64, 1>>>("counting")
    }
}
