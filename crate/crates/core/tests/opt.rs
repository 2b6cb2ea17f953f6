mod support;

use dememory_core::{
    generate_trace, HierarchyConfig, PolicyId, ReferenceTrace, Simulation, WorkloadSpec,
};
use proptest::prelude::*;
use support::exhaustive::min_faults;

const ONE_LEVEL: [PolicyId; 8] = [
    PolicyId::Fifo1,
    PolicyId::SecondChance1,
    PolicyId::Clock1,
    PolicyId::Nru1,
    PolicyId::Lru1,
    PolicyId::Nfu1,
    PolicyId::Aging1,
    PolicyId::Opt1,
];

fn faults(policy: PolicyId, frames: usize, trace: &ReferenceTrace) -> u64 {
    Simulation::new(HierarchyConfig::single(frames), policy, trace)
        .unwrap()
        .run()
        .misses
}

#[test]
fn oracle_on_textbook_trace() {
    let pages = [0, 1, 2, 0, 1, 3, 0, 1, 2, 3];
    // frozen from min_faults
    assert_eq!(min_faults(&pages, 3), 5);
    assert_eq!(min_faults(&pages, 2), 7);
    assert_eq!(min_faults(&pages, 1), 10);
    let t = ReferenceTrace::from_pages(pages);
    assert_eq!(faults(PolicyId::Opt1, 3, &t), 5);
    assert_eq!(faults(PolicyId::Opt1, 2, &t), 7);
    assert_eq!(faults(PolicyId::Opt1, 1, &t), 10);
}

#[test]
fn oracle_sanity() {
    assert_eq!(min_faults(&[], 2), 0);
    assert_eq!(min_faults(&[4, 4, 4], 1), 1);
    // Belady's anomaly trace, FIFO needs 9 faults with 3 frames; OPT 7
    assert_eq!(min_faults(&[1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5], 3), 7);
    let t = ReferenceTrace::from_pages([1, 2, 3, 4, 1, 2, 5, 1, 2, 3, 4, 5]);
    assert_eq!(faults(PolicyId::Fifo1, 3, &t), 9);
    assert_eq!(faults(PolicyId::Fifo1, 4, &t), 10);
}

proptest! {
    #[test]
    fn opt_matches_exhaustive_search(
        pages in proptest::collection::vec(0u32..6, 0..=12),
        frames in 1usize..=3,
    ) {
        let t = ReferenceTrace::from_pages(pages.iter().copied());
        prop_assert_eq!(faults(PolicyId::Opt1, frames, &t), min_faults(&pages, frames));
    }

    #[test]
    fn opt_dominates_online_policies(
        seed: u64,
        frames in 2usize..=5,
        indexes in 4u32..=10,
        refs in 0u64..=50,
    ) {
        let t = generate_trace(&WorkloadSpec::new(indexes, refs, seed)).unwrap();
        let opt = faults(PolicyId::Opt1, frames, &t);
        for p in ONE_LEVEL {
            prop_assert!(opt <= faults(p, frames, &t), "{} beat OPT", p);
        }
    }
}
