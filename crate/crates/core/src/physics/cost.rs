//! Analytic flop model of the kernels.
//!
//! Counted like [`lanepack::CountingPack`]: add, sub, mul, div, sqrt, min and
//! max are one flop per lane; sign flips, compares and selects are free.
//! The numbers are for W = 1; wider packs recompute a few overlapping lanes
//! at row ends, which the model deliberately ignores (they are not useful
//! work).
//!
//! Per sub-grid and RHS evaluation:
//!
//! | part | count | flops each |
//! |---|---|---|
//! | primitives (3 div, ke 5, p 3, c 3) | 896 cells | 14 |
//! | HLL (2 × 6 physical flux, 6 wave speeds, 2 + 1 setup, 5 × 7 blend) | 3 × 576 faces | 56 |
//! | divergence (per field 2 sub, 2 add, 1 mul… = 6) | 512 cells | 30 |
//! | gravity source (3 × 2 momentum, 6 energy) | 512 cells | 12 |
//!
//! Each coarse face bordering finer leaves additionally recomputes 256 fine
//! fluxes (primitives on both sides + HLL = 84) and averages them in groups
//! of four (4 per field, 5 fields, 64 cells).
//!
//! Per step and cell: the three RK stage updates (2 + 5 + 5 per field) and
//! the time-step bound (14 for primitives, 2 max, 1 add, 1 div).
//! Per gravity pair: 3 sub, 5 for r², 1 add, 1 sqrt, 1 div, 3 mul, 1 + 6
//! accumulate = 21.

use crate::mesh::ghost::{FACE_CELLS, SUBFACES};
use crate::mesh::subgrid::{CELLS, NFIELDS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelCostModel {
    pub primitive_per_cell: u64,
    pub primitive_cells: u64,
    pub hll_per_face: u64,
    pub faces: u64,
    pub divergence_per_cell: u64,
    pub gravity_source_per_cell: u64,
    pub reflux_per_coarse_face: u64,
    pub update_per_cell_step: u64,
    pub dt_per_cell: u64,
    pub flops_per_pair_gravity: u64,
}

impl KernelCostModel {
    pub const STANDARD: KernelCostModel = KernelCostModel {
        primitive_per_cell: 14,
        primitive_cells: 896,
        hll_per_face: 56,
        faces: 1728,
        divergence_per_cell: 30,
        gravity_source_per_cell: 12,
        reflux_per_coarse_face: (SUBFACES * (2 * 14 + 56) + FACE_CELLS * NFIELDS * 4) as u64,
        update_per_cell_step: 60,
        dt_per_cell: 18,
        flops_per_pair_gravity: 21,
    };

    /// One RHS evaluation of a whole sub-grid.
    pub fn rhs_per_subgrid(&self, gravity: bool) -> u64 {
        self.primitive_cells * self.primitive_per_cell
            + self.faces * self.hll_per_face
            + CELLS as u64 * (self.divergence_per_cell + if gravity { self.gravity_source_per_cell } else { 0 })
    }

    pub fn flops_per_cell_per_rhs(&self, gravity: bool) -> f64 {
        self.rhs_per_subgrid(gravity) as f64 / CELLS as f64
    }
}

impl Default for KernelCostModel {
    fn default() -> Self {
        Self::STANDARD
    }
}

/// Shape-dependent inputs of the estimate for one step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepShape {
    pub leaves: u64,
    pub coarse_fine_faces: u64,
    pub gravity: bool,
    pub gravity_pairs: u64,
}

impl KernelCostModel {
    pub fn flops_per_step(&self, s: &StepShape) -> u64 {
        let cells = s.leaves * CELLS as u64;
        3 * (s.leaves * self.rhs_per_subgrid(s.gravity) + s.coarse_fine_faces * self.reflux_per_coarse_face)
            + cells * (self.update_per_cell_step + self.dt_per_cell)
            + s.gravity_pairs * self.flops_per_pair_gravity
    }

    /// Total flops of `steps` steps.
    pub fn estimate(&self, s: &StepShape, steps: u64) -> u64 {
        steps * self.flops_per_step(s)
    }
}
