//! Run reports and hierarchy aggregates.

use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::policies::PolicyId;
use crate::types::{HierarchyConfig, LevelSpec};

/// Hits per miss. Unbounded when there were hits but no misses, which no
/// non-empty trace can produce since the first access always misses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratio {
    pub value: f64,
    pub unbounded: bool,
}

impl Ratio {
    pub fn finite(&self) -> Option<f64> {
        (!self.unbounded).then_some(self.value)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unbounded {
            f.write_str("inf")
        } else {
            write!(f, "{:.6}", self.value)
        }
    }
}

/// `hits / misses`; 0 when both are 0.
pub fn hit_miss_ratio(hits: u64, misses: u64) -> Ratio {
    match (hits, misses) {
        (0, 0) => Ratio {
            value: 0.0,
            unbounded: false,
        },
        (_, 0) => Ratio {
            value: f64::MAX,
            unbounded: true,
        },
        (h, m) => Ratio {
            value: h as f64 / m as f64,
            unbounded: false,
        },
    }
}

/// `hits / (hits + misses)`; 0 for no accesses.
pub fn hit_rate(hits: u64, misses: u64) -> f64 {
    let total = hits + misses;
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

/// Total frames over all levels.
pub fn total_volume(levels: &[LevelSpec]) -> usize {
    levels.iter().map(|l| l.capacity_frames).sum()
}

/// Mean speed factor over all levels.
pub fn total_speed(levels: &[LevelSpec]) -> f64 {
    if levels.is_empty() {
        return 0.0;
    }
    levels.iter().map(|l| l.speed_factor).sum::<f64>() / levels.len() as f64
}

/// Outcome of one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub policy: PolicyId,
    pub frames_per_level: Vec<usize>,
    pub hits: u64,
    pub misses: u64,
    /// Index 0 is level 1.
    pub hits_per_level: Vec<u64>,
    pub weighted_cost: f64,
    pub ticks: u64,
    /// Zero unless the caller timed the run.
    pub elapsed: Duration,
    pub indexes: u32,
    pub refs: u64,
    pub seed: Option<u64>,
}

impl SimReport {
    pub fn new(policy: PolicyId, config: &HierarchyConfig) -> Self {
        SimReport {
            policy,
            frames_per_level: config.levels.iter().map(|l| l.capacity_frames).collect(),
            hits: 0,
            misses: 0,
            hits_per_level: alloc::vec![0; config.depth()],
            weighted_cost: 0.0,
            ticks: 0,
            elapsed: Duration::ZERO,
            indexes: 0,
            refs: 0,
            seed: None,
        }
    }

    pub fn levels(&self) -> usize {
        self.frames_per_level.len()
    }

    pub fn accesses(&self) -> u64 {
        self.hits + self.misses
    }

    pub fn hit_miss_ratio(&self) -> Ratio {
        hit_miss_ratio(self.hits, self.misses)
    }

    pub fn hit_rate(&self) -> f64 {
        hit_rate(self.hits, self.misses)
    }

    /// Copy with `elapsed` zeroed, for comparing runs.
    pub fn without_elapsed(&self) -> Self {
        SimReport {
            elapsed: Duration::ZERO,
            ..self.clone()
        }
    }
}
