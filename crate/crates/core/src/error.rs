use thiserror::Error;

use crate::policies::PolicyId;
use crate::types::PageId;

/// Rejected hierarchy, workload or policy setup.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("hierarchy must have at least one level")]
    NoLevels,
    #[error("level {level}: capacity_frames must be >= 1")]
    ZeroCapacity { level: usize },
    #[error("level {level}: speed_factor must be >= 1 (got {speed})")]
    SpeedBelowOne { level: usize, speed: f64 },
    #[error("level {level}: tick_divisor must be >= 1")]
    ZeroTickDivisor { level: usize },
    #[error("level {level} is faster than level {prev}; speed factors must be non-decreasing")]
    SpeedOrder { level: usize, prev: usize },
    #[error("counter_width_bits must be in 1..=32 (got {0})")]
    CounterWidth(u32),
    #[error("tick_period must be >= 1")]
    ZeroTickPeriod,
    #[error("miss_penalty must be finite and >= 0 (got {0})")]
    MissPenalty(f64),
    #[error("{policy} needs a 1-level hierarchy (got {levels} levels)")]
    NeedsOneLevel { policy: PolicyId, levels: usize },
    #[error("{policy} needs at least 2 levels (got {levels})")]
    NeedsManyLevels { policy: PolicyId, levels: usize },
    #[error("{policy} is only defined for exactly 3 levels (got {levels})")]
    NeedsThreeLevels { policy: PolicyId, levels: usize },
    #[error("{levels} levels exceed the {width}-bit aging counter; need levels <= width")]
    TooManyLevelsForCounter { levels: usize, width: u32 },
    #[error("num_indexes must be >= 1")]
    NoIndexes,
    #[error("write_probability must be within 0..=1 (got {0})")]
    WriteProbability(f64),
}

/// Internal consistency failures. These indicate an engine bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("level {level} slot {slot} is already empty")]
    EmptySlot { level: usize, slot: usize },
    #[error("level {level} has no slot {slot}")]
    NoSuchSlot { level: usize, slot: usize },
    #[error("page {0} is resident more than once")]
    DuplicateResidency(PageId),
    #[error("page {0} is both resident and in the victim list")]
    ResidentVictim(PageId),
    #[error("level {level} holds {occupied} pages but has {capacity} frames")]
    OverCapacity {
        level: usize,
        occupied: usize,
        capacity: usize,
    },
    #[error("{seen} pages inserted but {resident} resident + {victims} victims")]
    Conservation {
        seen: usize,
        resident: usize,
        victims: usize,
    },
    #[error("page {0} location index disagrees with the page tables")]
    StaleLocation(PageId),
}
