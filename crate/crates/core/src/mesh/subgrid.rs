//! One leaf's 8³ cells plus a one-cell ghost shell.
//!
//! Storage is field-major: five `10³` boxes (rho, mom x/y/z, E), each with
//! `idx(i, j, k) = i + 10 (j + 10 k)`. Interior cells have all indices in
//! `1..=8`. An x-row of interior cells is 8 contiguous values, so it loads as
//! whole packs for any width up to 8.

use super::Key;

/// Interior cells per axis.
pub const N: usize = 8;
/// Box cells per axis (interior + ghosts).
pub const NB: usize = N + 2;
pub const BOX: usize = NB * NB * NB;
pub const CELLS: usize = N * N * N;
pub const NFIELDS: usize = 5;

pub const RHO: usize = 0;
pub const MOM: usize = 1;
pub const ENERGY: usize = 4;

pub const FIELD_NAMES: [&str; NFIELDS] = ["rho", "momx", "momy", "momz", "E"];

#[inline(always)]
pub const fn idx(i: usize, j: usize, k: usize) -> usize {
    i + NB * (j + NB * k)
}

/// Position of interior cell `(i, j, k)` (each in `1..=8`) in a dense 8³ array.
#[inline(always)]
pub const fn interior_idx(i: usize, j: usize, k: usize) -> usize {
    (i - 1) + N * ((j - 1) + N * (k - 1))
}

/// Box index of dense interior index `c`.
#[inline(always)]
pub const fn box_of_interior(c: usize) -> usize {
    idx(c % N + 1, (c / N) % N + 1, c / (N * N) + 1)
}

#[derive(Clone, Debug)]
pub struct SubGrid {
    key: Key,
    dx: f64,
    data: Vec<f64>,
}

impl SubGrid {
    pub fn new(key: Key, domain_edge: f64) -> Self {
        SubGrid { key, dx: cell_width(domain_edge, key.level()), data: vec![0.0; NFIELDS * BOX] }
    }

    pub fn key(&self) -> Key {
        self.key
    }

    pub fn level(&self) -> u8 {
        self.key.level()
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn field(&self, f: usize) -> &[f64] {
        &self.data[f * BOX..(f + 1) * BOX]
    }

    pub fn field_mut(&mut self, f: usize) -> &mut [f64] {
        &mut self.data[f * BOX..(f + 1) * BOX]
    }

    /// All five boxes, field-major.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, f: usize, cell: usize) -> f64 {
        self.data[f * BOX + cell]
    }

    #[inline]
    pub fn set(&mut self, f: usize, cell: usize, v: f64) {
        self.data[f * BOX + cell] = v;
    }

    /// Centre of box cell `(i, j, k)`; ghost indices give the centre of the
    /// same-level cell just outside.
    pub fn center(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        let c = self.key.coords();
        let b = [i, j, k];
        std::array::from_fn(|a| ((c[a] as f64 * N as f64) + (b[a] as f64 - 0.5)) * self.dx)
    }

    /// Copy interior values out in the checkpoint order: field-major, then
    /// x fastest.
    pub fn interior_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(NFIELDS * CELLS);
        for f in 0..NFIELDS {
            let b = self.field(f);
            for c in 0..CELLS {
                out.push(b[box_of_interior(c)]);
            }
        }
        out
    }

    pub fn set_interior_values(&mut self, vals: &[f64]) {
        assert_eq!(vals.len(), NFIELDS * CELLS);
        for f in 0..NFIELDS {
            let b = self.field_mut(f);
            for c in 0..CELLS {
                b[box_of_interior(c)] = vals[f * CELLS + c];
            }
        }
    }
}

pub fn cell_width(domain_edge: f64, level: u8) -> f64 {
    domain_edge / (N as f64 * (1u64 << level) as f64)
}
