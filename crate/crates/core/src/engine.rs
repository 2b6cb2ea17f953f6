//! The reference-processing loop.
//!
//! For each access: look the page up across all levels. A hit is charged the
//! level's speed factor and updates the page's bits in place. A miss is
//! charged the miss penalty, pulls the page out of the victim list if it was
//! there, and faults it in at level 1. After every `tick_period` accesses one
//! clock interrupt fires.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{ConfigError, EngineError};
use crate::metrics::SimReport;
use crate::policies::{self, PolicyId, PolicyState};
use crate::types::{Access, AccessOutcome, HierarchyConfig, Resolution};
use crate::workload::{ReferenceTrace, WorkloadSpec};

/// Sees every access after it has been processed (and after any tick).
pub trait Observer {
    fn observe(&mut self, access: &Access, outcome: &AccessOutcome, sim: &Simulation<'_>);
}

impl<F> Observer for F
where
    F: FnMut(&Access, &AccessOutcome, &Simulation<'_>),
{
    fn observe(&mut self, access: &Access, outcome: &AccessOutcome, sim: &Simulation<'_>) {
        self(access, outcome, sim)
    }
}

pub struct Simulation<'t> {
    config: HierarchyConfig,
    policy: PolicyId,
    trace: &'t ReferenceTrace,
    state: PolicyState,
    report: SimReport,
    position: usize,
    /// Distinct pages faulted in so far.
    seen: usize,
}

impl<'t> Simulation<'t> {
    pub fn new(
        config: HierarchyConfig,
        policy: PolicyId,
        trace: &'t ReferenceTrace,
    ) -> Result<Self, ConfigError> {
        policy.check(&config)?;
        let state = PolicyState::new(&config);
        let mut report = SimReport::new(policy, &config);
        report.refs = trace.len() as u64;
        report.indexes = trace.index_bound();
        Ok(Simulation {
            config,
            policy,
            trace,
            state,
            report,
            position: 0,
            seen: 0,
        })
    }

    /// Records the generating workload in the report.
    pub fn with_workload(mut self, spec: &WorkloadSpec) -> Self {
        self.report.indexes = spec.num_indexes;
        self.report.seed = Some(spec.seed);
        self
    }

    pub fn config(&self) -> &HierarchyConfig {
        &self.config
    }

    pub fn policy(&self) -> PolicyId {
        self.policy
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    pub fn report(&self) -> &SimReport {
        &self.report
    }

    /// Accesses processed so far.
    pub fn position(&self) -> usize {
        self.position
    }

    pub fn pages_seen(&self) -> usize {
        self.seen
    }

    pub fn check_invariants(&self) -> Result<(), EngineError> {
        self.state.check_invariants(self.seen)
    }

    /// Level holding `page`, if any.
    pub fn lookup(&self, page: crate::types::PageId) -> Option<usize> {
        self.state.lookup(page)
    }

    /// Processes the next access; `None` once the trace is exhausted.
    pub fn step(&mut self) -> Option<AccessOutcome> {
        let access = *self.trace.accesses().get(self.position)?;
        let outcome = match self.state.lookup(access.page) {
            Some(level) => {
                self.report.hits += 1;
                self.report.hits_per_level[level - 1] += 1;
                self.report.weighted_cost += self.config.level(level).speed_factor;
                let entry = self
                    .state
                    .entry_mut(access.page)
                    .expect("looked-up page is resident");
                policies::on_hit(entry, &access);
                AccessOutcome {
                    result: Resolution::Hit(level),
                    migrations: Vec::new(),
                }
            }
            None => {
                self.report.misses += 1;
                self.report.weighted_cost += self.config.miss_penalty;
                if !self.state.reclaim(access.page) {
                    self.seen += 1;
                }
                let mut migrations = Vec::new();
                policies::fault_insert(
                    self.policy,
                    &self.config,
                    &mut self.state,
                    &access,
                    self.trace.accesses(),
                    &mut migrations,
                );
                AccessOutcome {
                    result: Resolution::Miss,
                    migrations,
                }
            }
        };
        self.position += 1;
        if self
            .position
            .is_multiple_of(self.config.tick_period as usize)
        {
            self.report.ticks += 1;
            policies::on_tick(
                self.policy,
                &self.config,
                &mut self.state,
                self.report.ticks,
            );
        }
        Some(outcome)
    }

    pub fn run(mut self) -> SimReport {
        while self.step().is_some() {}
        self.report
    }

    pub fn run_observed(mut self, observer: &mut dyn Observer) -> SimReport {
        while let Some(access) = self.trace.accesses().get(self.position).copied() {
            let outcome = self.step().expect("access pending");
            observer.observe(&access, &outcome, &self);
        }
        self.report
    }
}

/// Page tables, one line per slot:
/// `L<level>[<slot>] page=<id> R=<bit> M=<bit> ctr=<binary counter>` or
/// `L<level>[<slot>] empty`. The counter is zero-padded to the configured
/// width.
pub fn format_snapshot(state: &PolicyState, counter_width_bits: u32) -> String {
    let mut out = String::new();
    let width = counter_width_bits as usize;
    for (i, lvl) in state.levels().iter().enumerate() {
        for (slot, e) in lvl.slots().iter().enumerate() {
            let _ = match e {
                Some(e) => writeln!(
                    out,
                    "L{}[{}] page={} R={} M={} ctr={:0width$b}",
                    i + 1,
                    slot,
                    e.page,
                    u8::from(e.r_bit),
                    u8::from(e.m_bit),
                    e.age_counter,
                ),
                None => writeln!(out, "L{}[{}] empty", i + 1, slot),
            };
        }
    }
    out
}
