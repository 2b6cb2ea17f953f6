//! Paging primitives for N-level memory hierarchies.
//!
//! This crate is `no_std` (it needs `alloc`). It holds the hierarchy model,
//! the seeded reference generator, every replacement policy and the
//! reference-processing engine. File formats, timing and the command line
//! live in the `dememory` crate.

#![no_std]

extern crate alloc;

pub mod engine;
pub mod error;
pub mod metrics;
pub mod policies;
pub mod types;
pub mod workload;

pub use engine::{format_snapshot, Observer, Simulation};
pub use error::{ConfigError, EngineError};
pub use metrics::{hit_miss_ratio, hit_rate, total_speed, total_volume, Ratio, SimReport};
pub use policies::{PolicyId, PolicyState};
pub use types::{
    leading_zero_bits, Access, AccessKind, AccessOutcome, HierarchyConfig, LevelSpec, Migration,
    PageEntry, PageId, Resolution, Tier,
};
pub use workload::{generate_trace, ReferenceTrace, WorkloadSpec};
