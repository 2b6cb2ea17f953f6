//! Host-side tooling around `dememory-core`: trace files, the append-only
//! results log, parameter sweeps and the `dememory` command line.

pub mod bench;
pub mod cli;
pub mod error;
pub mod log;
pub mod trace_io;

use std::time::Instant;

use dememory_core::{
    ConfigError, HierarchyConfig, Observer, PolicyId, ReferenceTrace, SimReport, Simulation,
    WorkloadSpec,
};

pub use error::Error;

/// Runs one simulation and fills in its wall-clock time.
pub fn simulate(
    config: HierarchyConfig,
    policy: PolicyId,
    trace: &ReferenceTrace,
    workload: Option<&WorkloadSpec>,
    observer: Option<&mut dyn Observer>,
) -> Result<SimReport, ConfigError> {
    let mut sim = Simulation::new(config, policy, trace)?;
    if let Some(spec) = workload {
        sim = sim.with_workload(spec);
    }
    let start = Instant::now();
    let mut report = match observer {
        Some(obs) => sim.run_observed(obs),
        None => sim.run(),
    };
    report.elapsed = start.elapsed();
    Ok(report)
}
