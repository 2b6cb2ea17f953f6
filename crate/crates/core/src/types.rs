//! Hierarchy shape, page entries, accesses and access outcomes.

use alloc::vec::Vec;
use core::fmt;

use crate::error::ConfigError;

/// One memory level: how many frames it has and how expensive it is to
/// touch relative to the fastest level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSpec {
    pub capacity_frames: usize,
    pub speed_factor: f64,
    /// Global ticks per local R-bit clearing tick (NRU_N only).
    pub tick_divisor: u32,
}

impl LevelSpec {
    /// A level whose NRU tick divisor follows its speed factor, so a level
    /// three times slower clears R bits three times less often.
    pub fn new(capacity_frames: usize, speed_factor: f64) -> Self {
        let divisor = if speed_factor.is_finite() && speed_factor >= 1.0 {
            speed_factor.round() as u32
        } else {
            1
        };
        LevelSpec {
            capacity_frames,
            speed_factor,
            tick_divisor: divisor.max(1),
        }
    }

    pub fn with_tick_divisor(mut self, tick_divisor: u32) -> Self {
        self.tick_divisor = tick_divisor;
        self
    }
}

/// Ordered levels, index 1 fastest. The backing store is an implicit level
/// `N + 1` of unbounded capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyConfig {
    pub levels: Vec<LevelSpec>,
    pub counter_width_bits: u32,
    /// References per global clock interrupt.
    pub tick_period: u32,
    /// Cost charged for a reference served from the backing store.
    pub miss_penalty: f64,
}

impl HierarchyConfig {
    pub const DEFAULT_COUNTER_WIDTH: u32 = 8;
    /// With one tick per reference an 8-bit counter is all zeros for every
    /// eviction candidate once a level has more than 8 frames, which collapses
    /// the N-level aging mapping onto the slowest level.
    pub const DEFAULT_TICK_PERIOD: u32 = 10;

    /// Defaults: 8-bit counters, one tick every 10 references, miss penalty
    /// of ten times the slowest level.
    pub fn new(levels: Vec<LevelSpec>) -> Self {
        let slowest = levels.last().map_or(1.0, |l| l.speed_factor);
        HierarchyConfig {
            levels,
            counter_width_bits: Self::DEFAULT_COUNTER_WIDTH,
            tick_period: Self::DEFAULT_TICK_PERIOD,
            miss_penalty: 10.0 * slowest,
        }
    }

    /// A single level of `frames` frames at speed 1.
    pub fn single(frames: usize) -> Self {
        Self::new(alloc::vec![LevelSpec::new(frames, 1.0)])
    }

    /// `speeds.len()` levels, each with `frames` frames.
    pub fn uniform(frames: usize, speeds: &[f64]) -> Self {
        Self::new(speeds.iter().map(|&v| LevelSpec::new(frames, v)).collect())
    }

    /// Three equal levels with speeds 1, 2, 3: DRAM plus two slower SCM tiers.
    pub fn three_tier(frames: usize) -> Self {
        Self::uniform(frames, &[1.0, 2.0, 3.0])
    }

    pub fn with_tick_period(mut self, tick_period: u32) -> Self {
        self.tick_period = tick_period;
        self
    }

    pub fn with_counter_width(mut self, bits: u32) -> Self {
        self.counter_width_bits = bits;
        self
    }

    pub fn with_miss_penalty(mut self, penalty: f64) -> Self {
        self.miss_penalty = penalty;
        self
    }

    /// Number of memory levels (excluding the backing store).
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// 1-based level lookup.
    pub fn level(&self, level: usize) -> &LevelSpec {
        &self.levels[level - 1]
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.levels.is_empty() {
            return Err(ConfigError::NoLevels);
        }
        for (i, spec) in self.levels.iter().enumerate() {
            let level = i + 1;
            if spec.capacity_frames == 0 {
                return Err(ConfigError::ZeroCapacity { level });
            }
            if !spec.speed_factor.is_finite() || spec.speed_factor < 1.0 {
                return Err(ConfigError::SpeedBelowOne {
                    level,
                    speed: spec.speed_factor,
                });
            }
            if spec.tick_divisor == 0 {
                return Err(ConfigError::ZeroTickDivisor { level });
            }
            if i > 0 && spec.speed_factor < self.levels[i - 1].speed_factor {
                return Err(ConfigError::SpeedOrder { level, prev: i });
            }
        }
        if !(1..=32).contains(&self.counter_width_bits) {
            return Err(ConfigError::CounterWidth(self.counter_width_bits));
        }
        if self.tick_period == 0 {
            return Err(ConfigError::ZeroTickPeriod);
        }
        if !self.miss_penalty.is_finite() || self.miss_penalty < 0.0 {
            return Err(ConfigError::MissPenalty(self.miss_penalty));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PageId(pub u32);

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AccessKind {
    Read,
    Write,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Access {
    pub page: PageId,
    pub kind: AccessKind,
    /// 0-based position in the trace.
    pub sequence: u64,
}

/// A resident page frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PageEntry {
    pub page: PageId,
    pub r_bit: bool,
    pub m_bit: bool,
    pub age_counter: u32,
    pub nfu_counter: u64,
    /// Sequence number at which the page entered its current level.
    pub arrival_stamp: u64,
    pub last_used_stamp: u64,
    /// 1-based level currently holding the page.
    pub level: usize,
}

impl PageEntry {
    /// Fresh entry with both status bits clear and zeroed counters.
    pub fn new(page: PageId, level: usize, stamp: u64) -> Self {
        PageEntry {
            page,
            r_bit: false,
            m_bit: false,
            age_counter: 0,
            nfu_counter: 0,
            arrival_stamp: stamp,
            last_used_stamp: stamp,
            level,
        }
    }
}

/// Where a page lives: a numbered level or the backing store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tier {
    Level(usize),
    BackingStore,
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tier::Level(l) => write!(f, "L{l}"),
            Tier::BackingStore => f.write_str("store"),
        }
    }
}

/// One page movement performed while servicing a fault.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Migration {
    pub page: PageId,
    pub from: Tier,
    pub to: Tier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Hit(usize),
    Miss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessOutcome {
    pub result: Resolution,
    /// Empty on hits; pages are never promoted.
    pub migrations: Vec<Migration>,
}

impl AccessOutcome {
    pub fn is_hit(&self) -> bool {
        matches!(self.result, Resolution::Hit(_))
    }
}

/// Number of zero bits before the first set bit, counting from the most
/// significant of `width` bits. `counter` must fit in `width` bits.
pub fn leading_zero_bits(counter: u32, width: u32) -> u32 {
    debug_assert!((1..=32).contains(&width));
    debug_assert!(width == 32 || counter < (1u32 << width));
    if counter == 0 {
        width
    } else {
        counter.leading_zeros() - (32 - width)
    }
}
