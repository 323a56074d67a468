//! Persistent worker pool with completion handles and barrier-style
//! parallel loops.
//!
//! Shared counters are 64-bit atomics only: `in_flight` (pool), `remaining`
//! (per parallel loop). Everything else is behind a mutex.

mod handle;
mod pool;

pub use handle::CompletionHandle;
pub use pool::{available_cores, PoolOptions, WorkerPool};
