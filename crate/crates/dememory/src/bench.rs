//! Parameter sweeps comparing one-level and N-level policies.
//!
//! Every `(axis value, seed)` pair gets one generated trace which all
//! policies share. One-level policies get a single level of `frames`
//! frames; N-level policies get `frames` frames on every level of the
//! template.
//!
//! CSV layout (header included, LF endings):
//! `axis,axis_value,policy,seed,hits,misses,hit_miss_ratio,hit_rate,weighted_cost,hit_miss_ratio_sd`.
//! Data rows leave the last column empty. Each `(axis value, policy)` group
//! is followed by one aggregate row whose seed field is `mean`; its numeric
//! fields are means over the group's seeds and the last column holds the
//! sample standard deviation of `hit_miss_ratio`. A failed cell keeps its
//! key fields, leaves the numbers empty and puts the error in the last column.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;
use std::str::FromStr;

use dememory_core::{generate_trace, HierarchyConfig, PolicyId, WorkloadSpec};
use rayon::prelude::*;

use crate::error::Error;

pub const CSV_HEADER: &str =
    "axis,axis_value,policy,seed,hits,misses,hit_miss_ratio,hit_rate,weighted_cost,hit_miss_ratio_sd";

pub const DEFAULT_SEED_BASE: u64 = 1000;
pub const DEFAULT_SEED_COUNT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Frames,
    Indexes,
    Refs,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Frames => "frames",
            Axis::Indexes => "indexes",
            Axis::Refs => "refs",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "frames" | "F" => Ok(Axis::Frames),
            "indexes" | "I" => Ok(Axis::Indexes),
            "refs" | "R" => Ok(Axis::Refs),
            _ => Err(format!("unknown axis {s:?} (frames, indexes, refs)")),
        }
    }
}

/// Sweep point scales: 10..=100, or 1e3..=1e5 (1e6 with `full_scale`).
pub fn scale_points(large: bool, full_scale: bool) -> Vec<u64> {
    if large {
        let mut pts = vec![1_000, 10_000, 100_000];
        if full_scale {
            pts.push(1_000_000);
        }
        pts
    } else {
        (1..=10).map(|i| i * 10).collect()
    }
}

pub fn default_seeds() -> Vec<u64> {
    (DEFAULT_SEED_BASE..DEFAULT_SEED_BASE + DEFAULT_SEED_COUNT as u64).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub points: Vec<u64>,
    /// Fixed values for the two non-axis parameters (the axis one is ignored).
    pub frames: usize,
    pub indexes: u32,
    pub refs: u64,
    pub policies: Vec<PolicyId>,
    /// Level speeds for N-level policies.
    pub speeds: Vec<f64>,
    pub seeds: Vec<u64>,
    pub tick_period: u32,
    pub write_probability: f64,
}

impl SweepSpec {
    /// AGING_1 against AGING_N on 3 levels with speeds 1, 2, 3; F=10,
    /// I=100, 1000 references, 20 seeds.
    pub fn new(axis: Axis, points: Vec<u64>) -> Self {
        SweepSpec {
            axis,
            points,
            frames: 10,
            indexes: 100,
            refs: 1000,
            policies: vec![PolicyId::Aging1, PolicyId::AgingN],
            speeds: vec![1.0, 2.0, 3.0],
            seeds: default_seeds(),
            tick_period: HierarchyConfig::DEFAULT_TICK_PERIOD,
            write_probability: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.points.is_empty() {
            return Err(Error::Sweep("no sweep points".into()));
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Sweep("points must be strictly increasing".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Sweep("no seeds".into()));
        }
        if self.policies.is_empty() {
            return Err(Error::Sweep("no policies".into()));
        }
        Ok(())
    }

    fn workload(&self, point: u64, seed: u64) -> Result<WorkloadSpec, String> {
        let indexes = match self.axis {
            Axis::Indexes => {
                u32::try_from(point).map_err(|_| format!("indexes {point} too large"))?
            }
            _ => self.indexes,
        };
        let refs = match self.axis {
            Axis::Refs => point,
            _ => self.refs,
        };
        Ok(WorkloadSpec::new(indexes, refs, seed).with_write_probability(self.write_probability))
    }

    fn config(&self, point: u64, policy: PolicyId) -> HierarchyConfig {
        let frames = match self.axis {
            Axis::Frames => point as usize,
            _ => self.frames,
        };
        let cfg = if policy.is_multi_level() {
            HierarchyConfig::uniform(frames, &self.speeds)
        } else {
            HierarchyConfig::single(frames)
        };
        cfg.with_tick_period(self.tick_period)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellStats {
    pub hits: u64,
    pub misses: u64,
    pub hit_miss_ratio: f64,
    pub hit_rate: f64,
    pub weighted_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis_value: u64,
    pub policy: PolicyId,
    pub seed: u64,
    pub result: Result<CellStats, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub axis_value: u64,
    pub policy: PolicyId,
    /// Successful seeds.
    pub n: usize,
    pub mean: CellStats,
    pub ratio_sd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: Axis,
    /// Ordered by (axis value, policy as listed, seed as listed).
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<Aggregate>,
}

fn run_cell(spec: &SweepSpec, point: u64, seed: u64) -> Vec<SweepRow> {
    let trace = spec.workload(point, seed).and_then(|w| {
        generate_trace(&w)
            .map(|t| (w, t))
            .map_err(|e| e.to_string())
    });
    spec.policies
        .iter()
        .map(|&policy| {
            let result = trace.as_ref().map_err(Clone::clone).and_then(|(w, t)| {
                crate::simulate(spec.config(point, policy), policy, t, Some(w), None)
                    .map(|r| CellStats {
                        hits: r.hits,
                        misses: r.misses,
                        hit_miss_ratio: r.hit_miss_ratio().value,
                        hit_rate: r.hit_rate(),
                        weighted_cost: r.weighted_cost,
                    })
                    .map_err(|e| e.to_string())
            });
            SweepRow {
                axis_value: point,
                policy,
                seed,
                result,
            }
        })
        .collect()
}

/// Mean and sample standard deviation (0 for fewer than two values).
pub fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, Error> {
    spec.validate()?;
    let cells: Vec<(u64, u64)> = spec
        .points
        .iter()
        .flat_map(|&p| spec.seeds.iter().map(move |&s| (p, s)))
        .collect();
    let per_cell: Vec<Vec<SweepRow>> = cells
        .par_iter()
        .map(|&(p, s)| run_cell(spec, p, s))
        .collect();

    let mut rows = Vec::with_capacity(cells.len() * spec.policies.len());
    let mut aggregates = Vec::new();
    for (pi, &point) in spec.points.iter().enumerate() {
        let group = &per_cell[pi * spec.seeds.len()..(pi + 1) * spec.seeds.len()];
        for (k, &policy) in spec.policies.iter().enumerate() {
            let cell_rows: Vec<&SweepRow> = group.iter().map(|c| &c[k]).collect();
            let ok: Vec<CellStats> = cell_rows
                .iter()
                .filter_map(|r| r.result.as_ref().ok().copied())
                .collect();
            rows.extend(cell_rows.into_iter().cloned());
            if ok.is_empty() {
                continue;
            }
            let col = |f: fn(&CellStats) -> f64| ok.iter().map(f).collect::<Vec<_>>();
            let (ratio_mean, ratio_sd) = mean_sd(&col(|c| c.hit_miss_ratio));
            let n = ok.len() as f64;
            aggregates.push(Aggregate {
                axis_value: point,
                policy,
                n: ok.len(),
                mean: CellStats {
                    hits: (ok.iter().map(|c| c.hits).sum::<u64>() as f64 / n).round() as u64,
                    misses: (ok.iter().map(|c| c.misses).sum::<u64>() as f64 / n).round() as u64,
                    hit_miss_ratio: ratio_mean,
                    hit_rate: mean_sd(&col(|c| c.hit_rate)).0,
                    weighted_cost: mean_sd(&col(|c| c.weighted_cost)).0,
                },
                ratio_sd,
            });
        }
    }
    Ok(SweepTable {
        axis: spec.axis,
        rows,
        aggregates,
    })
}

impl SweepTable {
    pub fn aggregate(&self, axis_value: u64, policy: PolicyId) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.axis_value == axis_value && a.policy == policy)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.result.is_err())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CSV_HEADER);
        out.push('\n');
        let mut rows = self.rows.iter().peekable();
        while let Some(row) = rows.next() {
            let axis = self.axis;
            match &row.result {
                Ok(c) => {
                    let _ = writeln!(
                        out,
                        "{axis},{},{},{},{},{},{:.6},{:.6},{:.3},",
                        row.axis_value,
                        row.policy,
                        row.seed,
                        c.hits,
                        c.misses,
                        c.hit_miss_ratio,
                        c.hit_rate,
                        c.weighted_cost
                    );
                }
                Err(e) => {
                    let msg = e.replace([',', '\n'], ";");
                    let _ = writeln!(
                        out,
                        "{axis},{},{},{},,,,,,{msg}",
                        row.axis_value, row.policy, row.seed
                    );
                }
            }
            let group_ends = rows
                .peek()
                .is_none_or(|n| n.axis_value != row.axis_value || n.policy != row.policy);
            if group_ends {
                if let Some(a) = self.aggregate(row.axis_value, row.policy) {
                    let _ = writeln!(
                        out,
                        "{axis},{},{},mean,{},{},{:.6},{:.6},{:.3},{:.6}",
                        a.axis_value,
                        a.policy,
                        a.mean.hits,
                        a.mean.misses,
                        a.mean.hit_miss_ratio,
                        a.mean.hit_rate,
                        a.mean.weighted_cost,
                        a.ratio_sd
                    );
                }
            }
        }
        out
    }

    /// Overwrites `path`.
    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// Paired AGING_N vs. AGING_N_PERTURBED runs on identical traces.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedComparison {
    /// `(seed, correct ratio, perturbed ratio)`
    pub pairs: Vec<(u64, f64, f64)>,
    pub mean_correct: f64,
    pub mean_perturbed: f64,
}

impl PerturbedComparison {
    pub fn mean_difference(&self) -> f64 {
        self.mean_correct - self.mean_perturbed
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,aging_n_ratio,aging_n_perturbed_ratio,difference\n");
        for &(seed, c, p) in &self.pairs {
            let _ = writeln!(out, "{seed},{c:.6},{p:.6},{:.6}", c - p);
        }
        let _ = writeln!(
            out,
            "mean,{:.6},{:.6},{:.6}",
            self.mean_correct,
            self.mean_perturbed,
            self.mean_difference()
        );
        out
    }
}

/// 3 levels of `frames` frames each, speeds 1, 2, 3.
pub fn compare_perturbed(
    frames: usize,
    indexes: u32,
    refs: u64,
    seeds: &[u64],
    tick_period: u32,
) -> Result<PerturbedComparison, Error> {
    if seeds.is_empty() {
        return Err(Error::Sweep("no seeds".into()));
    }
    let config = HierarchyConfig::three_tier(frames).with_tick_period(tick_period);
    let pairs = seeds
        .par_iter()
        .map(|&seed| {
            let spec = WorkloadSpec::new(indexes, refs, seed);
            let trace = generate_trace(&spec)?;
            let run = |policy| {
                crate::simulate(config.clone(), policy, &trace, Some(&spec), None)
                    .map(|r| r.hit_miss_ratio().value)
            };
            Ok((
                seed,
                run(PolicyId::AgingN)?,
                run(PolicyId::AgingNPerturbed)?,
            ))
        })
        .collect::<Result<Vec<_>, dememory_core::ConfigError>>()?;
    let n = pairs.len() as f64;
    Ok(PerturbedComparison {
        mean_correct: pairs.iter().map(|p| p.1).sum::<f64>() / n,
        mean_perturbed: pairs.iter().map(|p| p.2).sum::<f64>() / n,
        pairs,
    })
}
