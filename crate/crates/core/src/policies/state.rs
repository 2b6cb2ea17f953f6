use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::error::EngineError;
use crate::types::{HierarchyConfig, LevelSpec, PageEntry, PageId};

/// Page table of one memory level.
#[derive(Debug, Clone)]
pub struct Level {
    pub spec: LevelSpec,
    pub(crate) slots: Vec<Option<PageEntry>>,
    /// Occupied slots in arrival order (FIFO variants).
    pub(crate) queue: VecDeque<usize>,
    /// Clock hand (CLOCK_1).
    pub(crate) hand: usize,
    occupied: usize,
}

impl Level {
    fn new(spec: LevelSpec) -> Self {
        Level {
            spec,
            slots: alloc::vec![None; spec.capacity_frames],
            queue: VecDeque::with_capacity(spec.capacity_frames),
            hand: 0,
            occupied: 0,
        }
    }

    pub fn slots(&self) -> &[Option<PageEntry>] {
        &self.slots
    }

    pub fn occupied(&self) -> usize {
        self.occupied
    }

    pub fn is_full(&self) -> bool {
        self.occupied == self.slots.len()
    }

    pub fn free_slot(&self) -> Option<usize> {
        if self.is_full() {
            None
        } else {
            self.slots.iter().position(Option::is_none)
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &PageEntry> {
        self.slots.iter().flatten()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Location {
    Resident { level: usize, slot: usize },
    Victim(u64),
}

/// Per-level page tables plus the victim list (backing store contents in
/// order of eviction).
#[derive(Debug, Clone)]
pub struct PolicyState {
    levels: Vec<Level>,
    location: BTreeMap<PageId, Location>,
    victims: BTreeMap<u64, PageId>,
    next_victim: u64,
}

impl PolicyState {
    pub fn new(config: &HierarchyConfig) -> Self {
        PolicyState {
            levels: config.levels.iter().copied().map(Level::new).collect(),
            location: BTreeMap::new(),
            victims: BTreeMap::new(),
            next_victim: 0,
        }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// 1-based.
    pub fn level(&self, level: usize) -> &Level {
        &self.levels[level - 1]
    }

    pub(crate) fn level_mut(&mut self, level: usize) -> &mut Level {
        &mut self.levels[level - 1]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub(crate) fn levels_mut(&mut self) -> &mut [Level] {
        &mut self.levels
    }

    /// Level holding `page`, or `None` for victim-listed and unseen pages.
    pub fn lookup(&self, page: PageId) -> Option<usize> {
        match self.location.get(&page)? {
            Location::Resident { level, .. } => Some(*level),
            Location::Victim(_) => None,
        }
    }

    pub fn entry(&self, page: PageId) -> Option<&PageEntry> {
        match *self.location.get(&page)? {
            Location::Resident { level, slot } => self.levels[level - 1].slots[slot].as_ref(),
            Location::Victim(_) => None,
        }
    }

    pub(crate) fn entry_mut(&mut self, page: PageId) -> Option<&mut PageEntry> {
        match *self.location.get(&page)? {
            Location::Resident { level, slot } => self.levels[level - 1].slots[slot].as_mut(),
            Location::Victim(_) => None,
        }
    }

    /// Empty the slot and hand back its entry untouched.
    pub fn remove(&mut self, level: usize, slot: usize) -> Result<PageEntry, EngineError> {
        let lvl = self
            .levels
            .get_mut(level.wrapping_sub(1))
            .ok_or(EngineError::NoSuchSlot { level, slot })?;
        let cell = lvl
            .slots
            .get_mut(slot)
            .ok_or(EngineError::NoSuchSlot { level, slot })?;
        let entry = cell.take().ok_or(EngineError::EmptySlot { level, slot })?;
        lvl.occupied -= 1;
        if let Some(pos) = lvl.queue.iter().position(|&s| s == slot) {
            lvl.queue.remove(pos);
        }
        self.location.remove(&entry.page);
        Ok(entry)
    }

    /// Put `entry` into an empty slot and append it to the level's queue.
    pub(crate) fn place(&mut self, level: usize, slot: usize, mut entry: PageEntry) {
        let lvl = &mut self.levels[level - 1];
        debug_assert!(lvl.slots[slot].is_none());
        entry.level = level;
        lvl.slots[slot] = Some(entry);
        lvl.occupied += 1;
        lvl.queue.push_back(slot);
        self.location
            .insert(entry.page, Location::Resident { level, slot });
    }

    pub fn is_victim(&self, page: PageId) -> bool {
        matches!(self.location.get(&page), Some(Location::Victim(_)))
    }

    /// Append to the victim list.
    pub(crate) fn spill(&mut self, page: PageId) {
        let order = self.next_victim;
        self.next_victim += 1;
        self.victims.insert(order, page);
        self.location.insert(page, Location::Victim(order));
    }

    /// Drop `page` from the victim list; `true` if it was there.
    pub(crate) fn reclaim(&mut self, page: PageId) -> bool {
        if let Some(Location::Victim(order)) = self.location.get(&page).copied() {
            self.victims.remove(&order);
            self.location.remove(&page);
            true
        } else {
            false
        }
    }

    /// Victim-list pages, oldest eviction first.
    pub fn victims(&self) -> impl Iterator<Item = PageId> + '_ {
        self.victims.values().copied()
    }

    pub fn victim_count(&self) -> usize {
        self.victims.len()
    }

    pub fn resident_count(&self) -> usize {
        self.levels.iter().map(Level::occupied).sum()
    }

    /// Checks residency uniqueness, capacity bounds, the location index and
    /// that `seen` distinct pages are all accounted for.
    pub fn check_invariants(&self, seen: usize) -> Result<(), EngineError> {
        let mut resident = BTreeSet::new();
        for (i, lvl) in self.levels.iter().enumerate() {
            let level = i + 1;
            let occupied = lvl.slots.iter().filter(|s| s.is_some()).count();
            if occupied != lvl.occupied || occupied > lvl.spec.capacity_frames {
                return Err(EngineError::OverCapacity {
                    level,
                    occupied,
                    capacity: lvl.spec.capacity_frames,
                });
            }
            for (slot, e) in lvl.slots.iter().enumerate() {
                let Some(e) = e else { continue };
                if !resident.insert(e.page) {
                    return Err(EngineError::DuplicateResidency(e.page));
                }
                if e.level != level
                    || self.location.get(&e.page) != Some(&Location::Resident { level, slot })
                {
                    return Err(EngineError::StaleLocation(e.page));
                }
            }
        }
        for (&order, &page) in &self.victims {
            if resident.contains(&page) {
                return Err(EngineError::ResidentVictim(page));
            }
            if self.location.get(&page) != Some(&Location::Victim(order)) {
                return Err(EngineError::StaleLocation(page));
            }
        }
        let tracked = resident.len() + self.victims.len();
        if tracked != seen || self.location.len() != tracked {
            return Err(EngineError::Conservation {
                seen,
                resident: resident.len(),
                victims: self.victims.len(),
            });
        }
        Ok(())
    }
}
