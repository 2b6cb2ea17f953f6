// Brute-force minimum fault count: explores every eviction choice at every
// fault, merging identical resident sets. Independent of the policy code.

use std::collections::BTreeMap;

pub fn min_faults(pages: &[u32], frames: usize) -> u64 {
    // resident set (sorted) -> fewest faults reaching it
    let mut states: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    states.insert(Vec::new(), 0);
    for &p in pages {
        let mut next: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        let mut keep = |set: Vec<u32>, faults: u64| {
            let e = next.entry(set).or_insert(u64::MAX);
            *e = (*e).min(faults);
        };
        for (set, &faults) in &states {
            if set.contains(&p) {
                keep(set.clone(), faults);
            } else if set.len() < frames {
                let mut s = set.clone();
                s.push(p);
                s.sort_unstable();
                keep(s, faults + 1);
            } else {
                for evict in 0..set.len() {
                    let mut s = set.clone();
                    s[evict] = p;
                    s.sort_unstable();
                    keep(s, faults + 1);
                }
            }
        }
        states = next;
    }
    states.values().copied().min().unwrap_or(0)
}
