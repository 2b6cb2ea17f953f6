//! Victim selection and per-tick bookkeeping for each policy family.
//!
//! Every selector takes a level's slot array. Ties go to the lowest slot
//! index. Selectors return `None` only when the level holds no pages.

use alloc::collections::VecDeque;

use crate::types::{leading_zero_bits, Access, PageEntry, Tier};

/// NRU class: `2*R + M`. Class 0 is the best eviction candidate.
pub fn nru_class(entry: &PageEntry) -> u8 {
    2 * u8::from(entry.r_bit) + u8::from(entry.m_bit)
}

/// Slot of the first entry in the lowest non-empty NRU class.
pub fn nru_select_victim(slots: &[Option<PageEntry>]) -> Option<usize> {
    min_slot_by_key(slots, nru_class)
}

/// FIFO with a second chance. Inspects the queue head: a page with `R = 1`
/// has its bit cleared and goes to the tail, the first page with `R = 0` is
/// popped and returned. If every bit was set, one full pass clears them all
/// and the original head is chosen.
pub fn second_chance_select(
    queue: &mut VecDeque<usize>,
    slots: &mut [Option<PageEntry>],
) -> Option<usize> {
    // at most one rotation is needed before some head has R = 0
    for _ in 0..=queue.len() {
        let head = *queue.front()?;
        match slots[head].as_mut() {
            Some(e) if e.r_bit => {
                e.r_bit = false;
                queue.rotate_left(1);
            }
            _ => return queue.pop_front(),
        }
    }
    queue.pop_front()
}

/// Clock variant: `hand` sweeps the slots cyclically, clearing R bits until
/// it meets a page with `R = 0`. The hand is left one past the victim.
pub fn clock_select(hand: &mut usize, slots: &mut [Option<PageEntry>]) -> Option<usize> {
    let n = slots.len();
    if n == 0 || slots.iter().all(Option::is_none) {
        return None;
    }
    loop {
        let at = *hand % n;
        *hand = (at + 1) % n;
        if let Some(e) = slots[at].as_mut() {
            if !e.r_bit {
                return Some(at);
            }
            e.r_bit = false;
        }
    }
}

/// Shift every counter right by one, deposit the R bit in the top position
/// of the `width`-bit counter, then clear R.
pub fn aging_tick(slots: &mut [Option<PageEntry>], width: u32) {
    for e in slots.iter_mut().flatten() {
        age_entry(e, width);
    }
}

pub(crate) fn age_entry(e: &mut PageEntry, width: u32) {
    e.age_counter = (e.age_counter >> 1) | (u32::from(e.r_bit) << (width - 1));
    e.r_bit = false;
}

/// Slot with the lowest aging counter.
pub fn aging_select_victim(slots: &[Option<PageEntry>]) -> Option<usize> {
    min_slot_by_key(slots, |e| e.age_counter)
}

/// Where a page evicted from `current_level` should go, from the number of
/// leading zeros in its aging counter.
///
/// `raw = ceil(zeros / floor(width / depth))`, clamped into
/// `current_level + 1 ..= depth`. A page leaving the slowest level goes to
/// the backing store. Callers must ensure `depth <= width`.
pub fn aging_target_level(counter: u32, current_level: usize, width: u32, depth: usize) -> Tier {
    if current_level >= depth {
        return Tier::BackingStore;
    }
    let bits_per_level = (width as usize) / depth;
    debug_assert!(bits_per_level > 0, "depth exceeds counter width");
    let zeros = leading_zero_bits(counter, width) as usize;
    let raw = zeros.div_ceil(bits_per_level);
    Tier::Level(raw.clamp(current_level + 1, depth))
}

/// Control mapping for a 3-level hierarchy: evictions from level 1 that the
/// correct mapping sends to level 2 go to level 3 and vice versa. Evictions
/// from deeper levels are unchanged, since their only lower level is 3.
pub fn aging_target_level_perturbed(
    counter: u32,
    current_level: usize,
    width: u32,
    depth: usize,
) -> Tier {
    let target = aging_target_level(counter, current_level, width, depth);
    if current_level != 1 {
        return target;
    }
    match target {
        Tier::Level(2) => Tier::Level(3),
        Tier::Level(3) => Tier::Level(2),
        other => other,
    }
}

/// Slot of the least recently used page.
pub fn lru_select_victim(slots: &[Option<PageEntry>]) -> Option<usize> {
    min_slot_by_key(slots, |e| e.last_used_stamp)
}

/// Add each page's R bit into its use counter, then clear R.
pub fn nfu_tick(slots: &mut [Option<PageEntry>]) {
    for e in slots.iter_mut().flatten() {
        e.nfu_counter += u64::from(e.r_bit);
        e.r_bit = false;
    }
}

pub fn nfu_select_victim(slots: &[Option<PageEntry>]) -> Option<usize> {
    min_slot_by_key(slots, |e| e.nfu_counter)
}

/// Offline optimal: evict the resident page whose next reference at or
/// after `position` is farthest away. Pages never referenced again win over
/// any finite distance.
pub fn opt_select_victim(
    slots: &[Option<PageEntry>],
    trace: &[Access],
    position: usize,
) -> Option<usize> {
    let future = trace.get(position..).unwrap_or(&[]);
    let next_use = |e: &PageEntry| {
        future
            .iter()
            .position(|a| a.page == e.page)
            .unwrap_or(usize::MAX)
    };
    let mut best: Option<(usize, usize)> = None;
    for (slot, e) in slots.iter().enumerate() {
        if let Some(e) = e {
            let tag = next_use(e);
            if best.is_none_or(|(_, t)| tag > t) {
                best = Some((slot, tag));
            }
        }
    }
    best.map(|(slot, _)| slot)
}

fn min_slot_by_key<K: Ord>(
    slots: &[Option<PageEntry>],
    key: impl Fn(&PageEntry) -> K,
) -> Option<usize> {
    let mut best: Option<(usize, K)> = None;
    for (slot, e) in slots.iter().enumerate() {
        if let Some(e) = e {
            let k = key(e);
            if best.as_ref().is_none_or(|(_, b)| k < *b) {
                best = Some((slot, k));
            }
        }
    }
    best.map(|(slot, _)| slot)
}
