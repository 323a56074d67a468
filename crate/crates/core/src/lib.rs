//! Miniature AMR-octree hydrodynamics + gravity benchmark.

pub mod bench;
pub mod dist;
pub mod error;
pub mod mesh;

pub use error::{Error, Result};
pub mod physics;
pub mod runtime;
pub mod sim;

pub use sim::{Exchange, Local, RunConfig, Simulation};
