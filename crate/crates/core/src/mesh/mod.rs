//! Adaptive octree of 8³ sub-grids.

pub mod checkpoint;
pub mod ghost;
pub mod key;
pub mod scenario;
pub mod subgrid;
pub mod transfer;
pub mod tree;

pub use checkpoint::{Checkpoint, LeafRecord};
pub use ghost::{fill_ghosts, CellRef, Fields, GhostBuf, GhostPlan, Recipe};
pub use key::{Key, MAX_LEVEL};
pub use scenario::{Boundary, InitialCondition, Primitive, Scenario, ScenarioName};
pub use subgrid::SubGrid;
pub use tree::{Cover, Node, Tree};
