//! Flat little-endian tree dumps.
//!
//! Layout: `"LGRD"`, version `u32`, leaf count `u64`, then per leaf the key
//! `u64`, level `u8` and 512 × 5 `f64` interior values, field-major
//! (rho, momx, momy, momz, E) with x fastest inside each field.

use std::fs;
use std::path::Path;

use super::subgrid::{SubGrid, CELLS, NFIELDS};
use super::{Key, Scenario, Tree};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"LGRD";
const VERSION: u32 = 1;
const RECORD: usize = 8 + 1 + 8 * NFIELDS * CELLS;

#[derive(Clone, Debug, PartialEq)]
pub struct LeafRecord {
    pub key: Key,
    pub level: u8,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Checkpoint {
    pub leaves: Vec<LeafRecord>,
}

impl Checkpoint {
    pub fn from_leaves<'a>(leaves: impl IntoIterator<Item = &'a SubGrid>) -> Self {
        let leaves = leaves
            .into_iter()
            .map(|g| LeafRecord { key: g.key(), level: g.level(), values: g.interior_values() })
            .collect();
        Checkpoint { leaves }
    }

    pub fn from_tree(tree: &Tree) -> Self {
        Self::from_leaves(tree.leaves())
    }

    /// Concatenate rank shards and restore key order.
    pub fn merge(shards: impl IntoIterator<Item = Checkpoint>) -> Self {
        let mut leaves: Vec<LeafRecord> = shards.into_iter().flat_map(|c| c.leaves).collect();
        leaves.sort_by_key(|r| r.key);
        Checkpoint { leaves }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.leaves.len() * RECORD);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.leaves.len() as u64).to_le_bytes());
        for r in &self.leaves {
            out.extend_from_slice(&r.key.raw().to_le_bytes());
            out.push(r.level);
            for v in &r.values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Structure(format!("checkpoint: {m}"));
        if bytes.len() < 16 || &bytes[..4] != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if bytes.len() != 16 + n * RECORD {
            return Err(bad("length does not match leaf count"));
        }
        let leaves = bytes[16..]
            .chunks_exact(RECORD)
            .map(|rec| {
                let raw = u64::from_le_bytes(rec[..8].try_into().unwrap());
                let key = Key::from_raw(raw).ok_or_else(|| bad(&format!("invalid key {raw:#x}")))?;
                let level = rec[8];
                if level != key.level() {
                    return Err(bad(&format!("level {level} does not match key {key}")));
                }
                let values = rec[9..].chunks_exact(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())).collect();
                Ok(LeafRecord { key, level, values })
            })
            .collect::<Result<_>>()?;
        Ok(Checkpoint { leaves })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::decode(&fs::read(path)?)
    }

    /// Rebuild a tree (ghosts unset) from a complete dump.
    pub fn to_tree(&self, scenario: &Scenario, max_level: u8) -> Result<Tree> {
        let leaves = self
            .leaves
            .iter()
            .map(|r| {
                let mut g = SubGrid::new(r.key, scenario.domain_edge);
                g.set_interior_values(&r.values);
                g
            })
            .collect();
        Tree::from_leaves(scenario.clone(), max_level, leaves)
    }
}
