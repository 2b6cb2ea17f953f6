//! Replacement policies behind one contract: `on_hit`, `on_tick` and
//! `fault_insert`, all driven by the engine.
//!
//! One-level policies send their victim straight to the backing store.
//! The N-level policies insert at level 1 and cascade victims downwards:
//!
//! * `NRU_N` evicts the lowest NRU class and pushes the victim one level down.
//! * `FIFO_N` evicts with a second chance while some page at the level has
//!   `R = 0`; if every page there is referenced, the *incoming* page moves on
//!   to the next level instead and the level is left alone.
//! * `AGING_N` evicts the lowest counter and sends the victim directly to the
//!   level matching its count of idle ticks, skipping levels in between.
//!
//! Past the slowest level every page lands in the victim list.

mod select;
mod state;

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use select::{
    aging_select_victim, aging_target_level, aging_target_level_perturbed, aging_tick,
    clock_select, lru_select_victim, nfu_select_victim, nfu_tick, nru_class, nru_select_victim,
    opt_select_victim, second_chance_select,
};
pub use state::{Level, PolicyState};

use crate::error::ConfigError;
use crate::types::{Access, AccessKind, HierarchyConfig, Migration, PageEntry, Tier};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolicyId {
    Fifo1,
    SecondChance1,
    Clock1,
    Nru1,
    Lru1,
    Nfu1,
    Aging1,
    Opt1,
    NruN,
    FifoN,
    AgingN,
    AgingNPerturbed,
}

impl PolicyId {
    pub const ALL: [PolicyId; 12] = [
        PolicyId::Fifo1,
        PolicyId::SecondChance1,
        PolicyId::Clock1,
        PolicyId::Nru1,
        PolicyId::Lru1,
        PolicyId::Nfu1,
        PolicyId::Aging1,
        PolicyId::Opt1,
        PolicyId::NruN,
        PolicyId::FifoN,
        PolicyId::AgingN,
        PolicyId::AgingNPerturbed,
    ];

    /// Canonical upper-case name, e.g. `AGING_N`.
    pub fn name(self) -> &'static str {
        match self {
            PolicyId::Fifo1 => "FIFO_1",
            PolicyId::SecondChance1 => "SECOND_CHANCE_1",
            PolicyId::Clock1 => "CLOCK_1",
            PolicyId::Nru1 => "NRU_1",
            PolicyId::Lru1 => "LRU_1",
            PolicyId::Nfu1 => "NFU_1",
            PolicyId::Aging1 => "AGING_1",
            PolicyId::Opt1 => "OPT_1",
            PolicyId::NruN => "NRU_N",
            PolicyId::FifoN => "FIFO_N",
            PolicyId::AgingN => "AGING_N",
            PolicyId::AgingNPerturbed => "AGING_N_PERTURBED",
        }
    }

    /// Short command-line name, e.g. `aging-n`.
    pub fn cli_name(self) -> &'static str {
        match self {
            PolicyId::Fifo1 => "fifo",
            PolicyId::SecondChance1 => "second-chance",
            PolicyId::Clock1 => "clock",
            PolicyId::Nru1 => "nru",
            PolicyId::Lru1 => "lru",
            PolicyId::Nfu1 => "nfu",
            PolicyId::Aging1 => "aging",
            PolicyId::Opt1 => "opt",
            PolicyId::NruN => "nru-n",
            PolicyId::FifoN => "fifo-n",
            PolicyId::AgingN => "aging-n",
            PolicyId::AgingNPerturbed => "aging-n-perturbed",
        }
    }

    pub fn is_multi_level(self) -> bool {
        matches!(
            self,
            PolicyId::NruN | PolicyId::FifoN | PolicyId::AgingN | PolicyId::AgingNPerturbed
        )
    }

    pub fn uses_aging_counter(self) -> bool {
        matches!(
            self,
            PolicyId::Aging1 | PolicyId::AgingN | PolicyId::AgingNPerturbed
        )
    }

    /// Setup-time check of this policy against a hierarchy.
    pub fn check(self, config: &HierarchyConfig) -> Result<(), ConfigError> {
        config.validate()?;
        let levels = config.depth();
        if self.is_multi_level() {
            if levels < 2 {
                return Err(ConfigError::NeedsManyLevels {
                    policy: self,
                    levels,
                });
            }
        } else if levels != 1 {
            return Err(ConfigError::NeedsOneLevel {
                policy: self,
                levels,
            });
        }
        if matches!(self, PolicyId::AgingN | PolicyId::AgingNPerturbed)
            && levels > config.counter_width_bits as usize
        {
            return Err(ConfigError::TooManyLevelsForCounter {
                levels,
                width: config.counter_width_bits,
            });
        }
        if self == PolicyId::AgingNPerturbed && levels != 3 {
            return Err(ConfigError::NeedsThreeLevels {
                policy: self,
                levels,
            });
        }
        Ok(())
    }
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownPolicy;

impl fmt::Display for UnknownPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown page replacement algorithm")
    }
}

impl FromStr for PolicyId {
    type Err = UnknownPolicy;

    /// Accepts `A`/`B`, canonical names and CLI names (case-insensitive).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => return Ok(PolicyId::Aging1),
            "B" => return Ok(PolicyId::AgingN),
            _ => {}
        }
        PolicyId::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s) || p.cli_name().eq_ignore_ascii_case(s))
            .ok_or(UnknownPolicy)
    }
}

/// Reference bookkeeping for a resident page. Pages are never promoted.
pub fn on_hit(entry: &mut PageEntry, access: &Access) {
    entry.r_bit = true;
    if access.kind == AccessKind::Write {
        entry.m_bit = true;
    }
    entry.last_used_stamp = access.sequence;
}

/// Clock interrupt number `tick` (1-based).
pub fn on_tick(policy: PolicyId, config: &HierarchyConfig, state: &mut PolicyState, tick: u64) {
    match policy {
        PolicyId::Nru1 => {
            for lvl in state.levels_mut() {
                clear_r(lvl);
            }
        }
        PolicyId::NruN => {
            for lvl in state.levels_mut() {
                if tick.is_multiple_of(u64::from(lvl.spec.tick_divisor)) {
                    clear_r(lvl);
                }
            }
        }
        PolicyId::Aging1 | PolicyId::AgingN | PolicyId::AgingNPerturbed => {
            for lvl in state.levels_mut() {
                aging_tick(&mut lvl.slots, config.counter_width_bits);
            }
        }
        PolicyId::Nfu1 => {
            for lvl in state.levels_mut() {
                nfu_tick(&mut lvl.slots);
            }
        }
        PolicyId::Fifo1
        | PolicyId::SecondChance1
        | PolicyId::Clock1
        | PolicyId::Lru1
        | PolicyId::Opt1
        | PolicyId::FifoN => {}
    }
}

fn clear_r(lvl: &mut Level) {
    for e in lvl.slots.iter_mut().flatten() {
        e.r_bit = false;
    }
}

/// Entry for a page faulted in by `access`.
pub fn fresh_entry(policy: PolicyId, config: &HierarchyConfig, access: &Access) -> PageEntry {
    let mut e = PageEntry::new(access.page, 1, access.sequence);
    e.r_bit = true;
    e.m_bit = access.kind == AccessKind::Write;
    if policy.uses_aging_counter() {
        e.age_counter = 1 << (config.counter_width_bits - 1);
    }
    e
}

/// Services a fault for `access`: inserts its page from level 1 downwards,
/// cascading victims, and appends every page movement to `moves`.
///
/// `trace` is the whole trace (used by `OPT_1`); `access` must be
/// `trace[access.sequence]` for that policy. The page must not be resident.
pub fn fault_insert(
    policy: PolicyId,
    config: &HierarchyConfig,
    state: &mut PolicyState,
    access: &Access,
    trace: &[Access],
    moves: &mut Vec<Migration>,
) {
    debug_assert!(state.lookup(access.page).is_none());
    let depth = state.depth();
    let now = access.sequence;
    let mut carry = fresh_entry(policy, config, access);
    let mut from = Tier::BackingStore;
    let mut level = 1;

    loop {
        if level > depth {
            state.spill(carry.page);
            moves.push(Migration {
                page: carry.page,
                from,
                to: Tier::BackingStore,
            });
            return;
        }

        let lvl = state.level_mut(level);
        if let Some(slot) = lvl.free_slot() {
            settle(state, level, slot, carry, from, now, moves);
            return;
        }

        let slot = match policy {
            PolicyId::Fifo1 => lvl.queue.front().copied(),
            PolicyId::SecondChance1 => second_chance_select(&mut lvl.queue, &mut lvl.slots),
            PolicyId::Clock1 => clock_select(&mut lvl.hand, &mut lvl.slots),
            PolicyId::Nru1 | PolicyId::NruN => nru_select_victim(&lvl.slots),
            PolicyId::Lru1 => lru_select_victim(&lvl.slots),
            PolicyId::Nfu1 => nfu_select_victim(&lvl.slots),
            PolicyId::Aging1 | PolicyId::AgingN | PolicyId::AgingNPerturbed => {
                aging_select_victim(&lvl.slots)
            }
            PolicyId::Opt1 => opt_select_victim(&lvl.slots, trace, now as usize),
            PolicyId::FifoN => {
                if lvl.entries().any(|e| !e.r_bit) {
                    second_chance_select(&mut lvl.queue, &mut lvl.slots)
                } else {
                    // every page here is referenced: pass the newcomer down
                    level += 1;
                    continue;
                }
            }
        };
        let slot = slot.expect("a full level always yields a victim");

        let victim = state
            .remove(level, slot)
            .expect("selected slot is occupied");
        settle(state, level, slot, carry, from, now, moves);

        let next = match policy {
            PolicyId::AgingN => {
                aging_target_level(victim.age_counter, level, config.counter_width_bits, depth)
            }
            PolicyId::AgingNPerturbed => aging_target_level_perturbed(
                victim.age_counter,
                level,
                config.counter_width_bits,
                depth,
            ),
            _ => Tier::Level(level + 1),
        };
        from = Tier::Level(level);
        carry = victim;
        level = match next {
            Tier::Level(l) => l,
            Tier::BackingStore => depth + 1,
        };
    }
}

fn settle(
    state: &mut PolicyState,
    level: usize,
    slot: usize,
    mut entry: PageEntry,
    from: Tier,
    now: u64,
    moves: &mut Vec<Migration>,
) {
    entry.arrival_stamp = now;
    state.place(level, slot, entry);
    moves.push(Migration {
        page: entry.page,
        from,
        to: Tier::Level(level),
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PageId;
    use crate::workload::ReferenceTrace;

    fn read(page: u32, seq: u64) -> Access {
        Access {
            page: PageId(page),
            kind: AccessKind::Read,
            sequence: seq,
        }
    }

    fn insert(
        policy: PolicyId,
        cfg: &HierarchyConfig,
        state: &mut PolicyState,
        access: Access,
    ) -> Vec<Migration> {
        let mut moves = Vec::new();
        fault_insert(policy, cfg, state, &access, &[], &mut moves);
        moves
    }

    #[test]
    fn parse_names() {
        assert_eq!("A".parse(), Ok(PolicyId::Aging1));
        assert_eq!("B".parse(), Ok(PolicyId::AgingN));
        assert_eq!("fifo-n".parse(), Ok(PolicyId::FifoN));
        assert_eq!("AGING_N_PERTURBED".parse(), Ok(PolicyId::AgingNPerturbed));
        assert_eq!("second-chance".parse(), Ok(PolicyId::SecondChance1));
        assert_eq!("Z".parse::<PolicyId>(), Err(UnknownPolicy));
        for p in PolicyId::ALL {
            assert_eq!(p.cli_name().parse(), Ok(p));
            assert_eq!(p.name().parse(), Ok(p));
        }
    }

    #[test]
    fn level_requirements() {
        let one = HierarchyConfig::single(4);
        let three = HierarchyConfig::three_tier(4);
        assert!(PolicyId::Aging1.check(&one).is_ok());
        assert!(matches!(
            PolicyId::Aging1.check(&three),
            Err(ConfigError::NeedsOneLevel { .. })
        ));
        assert!(matches!(
            PolicyId::AgingN.check(&one),
            Err(ConfigError::NeedsManyLevels { .. })
        ));
        assert!(PolicyId::AgingNPerturbed.check(&three).is_ok());
        let two = HierarchyConfig::uniform(4, &[1.0, 2.0]);
        assert!(matches!(
            PolicyId::AgingNPerturbed.check(&two),
            Err(ConfigError::NeedsThreeLevels { .. })
        ));
        let narrow = HierarchyConfig::three_tier(4).with_counter_width(2);
        assert_eq!(
            PolicyId::AgingN.check(&narrow),
            Err(ConfigError::TooManyLevelsForCounter {
                levels: 3,
                width: 2
            })
        );
        assert!(PolicyId::NruN.check(&narrow).is_ok());
    }

    #[test]
    fn free_frame_placement() {
        let cfg = HierarchyConfig::single(2);
        let mut s = PolicyState::new(&cfg);
        let moves = insert(PolicyId::Fifo1, &cfg, &mut s, read(0, 0));
        assert_eq!(
            moves,
            [Migration {
                page: PageId(0),
                from: Tier::BackingStore,
                to: Tier::Level(1)
            }]
        );
        assert_eq!(s.level(1).slots()[0].unwrap().page, PageId(0));
        assert!(s.level(1).slots()[1].is_none());
        assert_eq!(s.victim_count(), 0);
    }

    #[test]
    fn fresh_entries() {
        let cfg = HierarchyConfig::single(2);
        let w = Access {
            kind: AccessKind::Write,
            ..read(3, 9)
        };
        let e = fresh_entry(PolicyId::Aging1, &cfg, &w);
        assert!(e.r_bit && e.m_bit);
        assert_eq!(e.age_counter, 0b1000_0000);
        assert_eq!((e.arrival_stamp, e.last_used_stamp), (9, 9));
        assert_eq!(
            fresh_entry(PolicyId::Lru1, &cfg, &read(3, 9)).age_counter,
            0
        );
    }

    #[test]
    fn aging_n_sends_victim_by_idle_ticks() {
        let cfg = HierarchyConfig::three_tier(2);
        let mut s = PolicyState::new(&cfg);
        for p in 0..2 {
            insert(PolicyId::AgingN, &cfg, &mut s, read(p, p as u64));
        }
        s.entry_mut(PageId(0)).unwrap().age_counter = 0b0001_1000;
        s.entry_mut(PageId(1)).unwrap().age_counter = 0b1100_0000;
        let moves = insert(PolicyId::AgingN, &cfg, &mut s, read(9, 2));
        assert_eq!(
            moves,
            [
                Migration {
                    page: PageId(9),
                    from: Tier::BackingStore,
                    to: Tier::Level(1)
                },
                Migration {
                    page: PageId(0),
                    from: Tier::Level(1),
                    to: Tier::Level(2)
                },
            ]
        );
        assert_eq!(s.level(1).slots()[0].unwrap().page, PageId(9));
        let moved = s.entry(PageId(0)).unwrap();
        assert_eq!((moved.level, moved.age_counter), (2, 0b0001_1000));
    }

    #[test]
    fn aging_n_skips_levels_and_cascades() {
        let cfg = HierarchyConfig::three_tier(1);
        let mut s = PolicyState::new(&cfg);
        insert(PolicyId::AgingN, &cfg, &mut s, read(0, 0));
        s.entry_mut(PageId(0)).unwrap().age_counter = 0;
        // idle page skips level 2
        let moves = insert(PolicyId::AgingN, &cfg, &mut s, read(1, 1));
        assert_eq!(moves[1].to, Tier::Level(3));
        assert_eq!(s.level(2).occupied(), 0);

        // level 3 full: its page is evicted to the store
        s.entry_mut(PageId(1)).unwrap().age_counter = 0;
        let moves = insert(PolicyId::AgingN, &cfg, &mut s, read(2, 2));
        assert_eq!(
            moves.iter().map(|m| (m.page.0, m.to)).collect::<Vec<_>>(),
            [
                (2, Tier::Level(1)),
                (1, Tier::Level(3)),
                (0, Tier::BackingStore)
            ]
        );
        assert!(s.check_invariants(3).is_ok());
    }

    #[test]
    fn perturbed_redirects_level_two_to_three() {
        let cfg = HierarchyConfig::three_tier(1);
        let mut s = PolicyState::new(&cfg);
        insert(PolicyId::AgingNPerturbed, &cfg, &mut s, read(0, 0));
        s.entry_mut(PageId(0)).unwrap().age_counter = 0b0001_1000;
        let moves = insert(PolicyId::AgingNPerturbed, &cfg, &mut s, read(1, 1));
        assert_eq!(moves[1].to, Tier::Level(3));
    }

    #[test]
    fn fifo_n_all_referenced_passes_newcomer_down() {
        let cfg = HierarchyConfig::three_tier(2);
        let mut s = PolicyState::new(&cfg);
        for p in 0..2 {
            insert(PolicyId::FifoN, &cfg, &mut s, read(p, p as u64));
        }
        let before: Vec<_> = s.level(1).slots().to_vec();
        let moves = insert(PolicyId::FifoN, &cfg, &mut s, read(5, 2));
        assert_eq!(
            moves,
            [Migration {
                page: PageId(5),
                from: Tier::BackingStore,
                to: Tier::Level(2)
            }]
        );
        assert_eq!(s.level(1).slots(), &before[..]);
    }

    #[test]
    fn fifo_n_second_chance_when_some_bit_clear() {
        let cfg = HierarchyConfig::three_tier(2);
        let mut s = PolicyState::new(&cfg);
        for p in 0..2 {
            insert(PolicyId::FifoN, &cfg, &mut s, read(p, p as u64));
        }
        s.entry_mut(PageId(1)).unwrap().r_bit = false;
        let moves = insert(PolicyId::FifoN, &cfg, &mut s, read(5, 2));
        // page 0 gets its second chance, page 1 moves down
        assert_eq!(moves[1].page, PageId(1));
        assert_eq!(moves[1].to, Tier::Level(2));
        assert!(!s.entry(PageId(0)).unwrap().r_bit);
        assert_eq!(s.lookup(PageId(5)), Some(1));
    }

    #[test]
    fn fifo_n_all_referenced_everywhere_spills_newcomer() {
        let cfg = HierarchyConfig::uniform(1, &[1.0, 2.0]);
        let mut s = PolicyState::new(&cfg);
        insert(PolicyId::FifoN, &cfg, &mut s, read(0, 0));
        insert(PolicyId::FifoN, &cfg, &mut s, read(1, 1));
        let moves = insert(PolicyId::FifoN, &cfg, &mut s, read(2, 2));
        assert_eq!(moves[0].to, Tier::BackingStore);
        assert!(s.is_victim(PageId(2)));
        assert!(s.check_invariants(3).is_ok());
    }

    #[test]
    fn nru_n_cascades_level_by_level() {
        let cfg = HierarchyConfig::three_tier(1);
        let mut s = PolicyState::new(&cfg);
        for p in 0..4 {
            let moves = insert(PolicyId::NruN, &cfg, &mut s, read(p, p as u64));
            assert_eq!(moves.len(), (p as usize + 1).min(4));
        }
        assert_eq!(s.lookup(PageId(3)), Some(1));
        assert_eq!(s.lookup(PageId(2)), Some(2));
        assert_eq!(s.lookup(PageId(1)), Some(3));
        assert!(s.is_victim(PageId(0)));
    }

    #[test]
    fn nru_n_preserves_bits_on_migration() {
        let cfg = HierarchyConfig::uniform(1, &[1.0, 2.0]);
        let mut s = PolicyState::new(&cfg);
        let w = Access {
            kind: AccessKind::Write,
            ..read(0, 0)
        };
        insert(PolicyId::NruN, &cfg, &mut s, w);
        insert(PolicyId::NruN, &cfg, &mut s, read(1, 1));
        let moved = s.entry(PageId(0)).unwrap();
        assert_eq!((moved.level, moved.r_bit, moved.m_bit), (2, true, true));
        assert_eq!(moved.arrival_stamp, 1);
    }

    #[test]
    fn opt_uses_future() {
        let cfg = HierarchyConfig::single(2);
        let t = ReferenceTrace::from_pages([0, 1, 2, 1, 0]);
        let mut s = PolicyState::new(&cfg);
        let mut moves = Vec::new();
        for a in &t.accesses()[..3] {
            moves.clear();
            fault_insert(PolicyId::Opt1, &cfg, &mut s, a, t.accesses(), &mut moves);
        }
        // at position 2, page 1 is used at 3 and page 0 at 4
        assert!(s.is_victim(PageId(0)));
        assert_eq!(moves.last().unwrap().page, PageId(0));
    }

    #[test]
    fn nru_n_tick_divisors() {
        let cfg = HierarchyConfig::three_tier(1);
        let mut s = PolicyState::new(&cfg);
        for p in 0..3 {
            insert(PolicyId::NruN, &cfg, &mut s, read(p, p as u64));
        }
        let set_all = |s: &mut PolicyState| {
            for p in 0..3 {
                s.entry_mut(PageId(p)).unwrap().r_bit = true;
            }
        };
        let bits = |s: &PolicyState| -> Vec<bool> {
            (1..=3)
                .map(|l| s.level(l).slots()[0].unwrap().r_bit)
                .collect()
        };
        set_all(&mut s);
        on_tick(PolicyId::NruN, &cfg, &mut s, 6);
        assert_eq!(bits(&s), [false, false, false]);
        set_all(&mut s);
        on_tick(PolicyId::NruN, &cfg, &mut s, 1);
        assert_eq!(bits(&s), [false, true, true]);
        set_all(&mut s);
        on_tick(PolicyId::NruN, &cfg, &mut s, 4);
        assert_eq!(bits(&s), [false, false, true]);
    }

    #[test]
    fn hit_bookkeeping() {
        let mut e = PageEntry::new(PageId(1), 2, 0);
        on_hit(&mut e, &read(1, 7));
        assert!(e.r_bit && !e.m_bit);
        assert_eq!((e.level, e.last_used_stamp), (2, 7));
        on_hit(
            &mut e,
            &Access {
                kind: AccessKind::Write,
                ..read(1, 8)
            },
        );
        assert!(e.r_bit && e.m_bit);
        assert_eq!(e.level, 2);
    }
}
