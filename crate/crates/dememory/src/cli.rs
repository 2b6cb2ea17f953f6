//! Command line: the positional `dememory` form plus `simulate`, `sweep` and
//! `gen-trace` subcommands.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use dememory_core::{
    format_snapshot, generate_trace, Access, AccessKind, AccessOutcome, HierarchyConfig, LevelSpec,
    Observer, PolicyId, ReferenceTrace, Resolution, SimReport, Simulation, WorkloadSpec,
};

use crate::bench::{self, Axis, SweepSpec};
use crate::error::Error;
use crate::{log, trace_io};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20151201;

pub const SUBCOMMANDS: [&str; 3] = ["simulate", "sweep", "gen-trace"];

pub fn usage() -> String {
    let mut s = String::from(
        "usage: dememory <algorithm> <num_frames> <show_process> <debug> <indexes> <page_refs> [--seed N] [--tick-period N] [--write-prob P]
       dememory simulate|sweep|gen-trace [options]   (see `dememory <subcommand> --help`)

positional form:
  algorithm     page replacement algorithm (codes below)
  num_frames    page frames per memory level (int > 0)
  show_process  1 = print the page tables after each reference, 0 = off
  debug         1 = print every page movement, 0 = off
  indexes       unique page indexes (int > 0)
  page_refs     random page references (int > 0)

algorithms:
  A                  AGING_1: aging on one level
  B                  AGING_N: memory-aware aging on 3 levels, speeds 1,2,3
",
    );
    for p in PolicyId::ALL {
        let levels = if p.is_multi_level() {
            "3 levels"
        } else {
            "1 level"
        };
        s.push_str(&format!("  {:<18} {} ({levels})\n", p.cli_name(), p.name()));
    }
    s.push_str(
        "
subcommands:
  simulate    run one simulation with an explicit hierarchy (--level FRAMES:SPEED ...)
  sweep       hit/miss ratio sweep over frames, indexes or refs; writes CSV
  gen-trace   write a generated reference trace file

Results of every simulation are appended to dememory.log (override with $DEMEMORY_LOG).
",
    );
    s
}

#[derive(Debug, Clone, PartialEq)]
pub enum TraceSource {
    Generated(WorkloadSpec),
    File(PathBuf),
}

/// Everything needed for one simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunArgs {
    pub policy: PolicyId,
    pub config: HierarchyConfig,
    pub source: TraceSource,
    pub show_process: bool,
    pub debug: bool,
    /// `true` when the seed was not given explicitly.
    pub default_seed: bool,
    pub log: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Invocation {
    Run(RunArgs),
    Sweep(SweepCmd),
    GenTrace(GenTraceCmd),
    Help,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage_err(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn positive<T: std::str::FromStr + PartialOrd + Default>(
    name: &str,
    value: &str,
) -> Result<T, UsageError> {
    match value.parse::<T>() {
        Ok(v) if v > T::default() => Ok(v),
        _ => Err(usage_err(format!(
            "{name}: expected an integer > 0, got {value:?}"
        ))),
    }
}

fn flag(name: &str, value: &str) -> Result<bool, UsageError> {
    match value {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(usage_err(format!("{name}: expected 1 or 0, got {value:?}"))),
    }
}

fn parse_policy(value: &str) -> Result<PolicyId, String> {
    value
        .parse()
        .map_err(|_| format!("unknown algorithm {value:?}; use A, B or one of the listed names"))
}

/// Hierarchy used by the positional form: one level for one-level
/// policies, three equal levels with speeds 1, 2, 3 otherwise.
pub fn compat_config(policy: PolicyId, frames: usize) -> HierarchyConfig {
    if policy.is_multi_level() {
        HierarchyConfig::three_tier(frames)
    } else {
        HierarchyConfig::single(frames)
    }
}

/// The positional form: exactly six arguments, plus optional `--seed`,
/// `--tick-period` and `--write-prob` anywhere.
pub fn parse_compat(args: &[String]) -> Result<RunArgs, UsageError> {
    let mut positional = Vec::new();
    let mut seed = None;
    let mut tick_period = HierarchyConfig::DEFAULT_TICK_PERIOD;
    let mut write_prob = 0.0;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let (key, inline) = match arg.split_once('=') {
            Some((k, v)) if k.starts_with("--") => (k, Some(v.to_string())),
            _ => (arg.as_str(), None),
        };
        if !key.starts_with("--") {
            positional.push(arg.as_str());
            continue;
        }
        let mut value = || {
            inline
                .clone()
                .or_else(|| it.next().cloned())
                .ok_or_else(|| usage_err(format!("{key}: missing value")))
        };
        match key {
            "--seed" => {
                let v = value()?;
                seed = Some(
                    v.parse::<u64>()
                        .map_err(|_| usage_err(format!("--seed: bad value {v:?}")))?,
                );
            }
            "--tick-period" => tick_period = positive("--tick-period", &value()?)?,
            "--write-prob" => {
                let v = value()?;
                write_prob = match v.parse::<f64>() {
                    Ok(p) if (0.0..=1.0).contains(&p) => p,
                    _ => return Err(usage_err(format!("--write-prob: expected 0..1, got {v:?}"))),
                };
            }
            _ => return Err(usage_err(format!("unknown option {key}"))),
        }
    }
    let [algorithm, frames, show, debug, indexes, refs] = positional[..] else {
        return Err(usage_err(format!(
            "expected 6 positional arguments, got {}",
            positional.len()
        )));
    };
    let policy = parse_policy(algorithm).map_err(|e| usage_err(format!("algorithm: {e}")))?;
    let frames: usize = positive("num_frames", frames)?;
    let show_process = flag("show_process", show)?;
    let debug = flag("debug", debug)?;
    let indexes: u32 = positive("indexes", indexes)?;
    let refs: u64 = positive("page_refs", refs)?;
    Ok(RunArgs {
        policy,
        config: compat_config(policy, frames).with_tick_period(tick_period),
        source: TraceSource::Generated(
            WorkloadSpec::new(indexes, refs, seed.unwrap_or(DEFAULT_SEED))
                .with_write_probability(write_prob),
        ),
        show_process,
        debug,
        default_seed: seed.is_none(),
        log: true,
    })
}

#[derive(Debug, Parser)]
#[command(name = "dememory", about = "N-level memory hierarchy paging simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one simulation with an explicit hierarchy.
    Simulate(SimulateCmd),
    /// Hit/miss ratio sweep; writes CSV.
    Sweep(SweepCmd),
    /// Write a generated reference trace.
    GenTrace(GenTraceCmd),
}

fn parse_level(s: &str) -> Result<LevelSpec, String> {
    let (frames, speed) = s
        .split_once(':')
        .ok_or_else(|| format!("expected FRAMES:SPEED, got {s:?}"))?;
    let frames = frames
        .parse::<usize>()
        .map_err(|_| format!("bad frame count {frames:?}"))?;
    let speed = speed
        .parse::<f64>()
        .map_err(|_| format!("bad speed factor {speed:?}"))?;
    Ok(LevelSpec::new(frames, speed))
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct WorkloadArgs {
    /// Unique page indexes.
    #[arg(long, default_value_t = 100)]
    pub indexes: u32,
    /// Page references to generate.
    #[arg(long, default_value_t = 1000)]
    pub refs: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of references that are writes.
    #[arg(long, default_value_t = 0.0)]
    pub write_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
struct SimulateCmd {
    #[arg(long, short, value_parser = parse_policy)]
    policy: PolicyId,
    /// One memory level, fastest first; repeat for more levels.
    #[arg(long = "level", value_name = "FRAMES:SPEED", value_parser = parse_level)]
    levels: Vec<LevelSpec>,
    /// Shorthand hierarchy when no --level is given (3 levels for N-level policies).
    #[arg(long, default_value_t = 10)]
    frames: usize,
    #[command(flatten)]
    workload: WorkloadArgs,
    /// Read references from a trace file instead of generating them.
    #[arg(long, conflicts_with_all = ["seed", "write_prob"])]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = HierarchyConfig::DEFAULT_TICK_PERIOD)]
    tick_period: u32,
    #[arg(long, default_value_t = HierarchyConfig::DEFAULT_COUNTER_WIDTH)]
    counter_width: u32,
    /// Defaults to 10 x the slowest level's speed factor.
    #[arg(long)]
    miss_penalty: Option<f64>,
    #[arg(long)]
    show_process: bool,
    #[arg(long)]
    debug: bool,
    /// Skip appending to the results log.
    #[arg(long)]
    no_log: bool,
}

impl SimulateCmd {
    fn into_run(self) -> RunArgs {
        let mut config = if self.levels.is_empty() {
            compat_config(self.policy, self.frames)
        } else {
            HierarchyConfig::new(self.levels)
        };
        config = config
            .with_tick_period(self.tick_period)
            .with_counter_width(self.counter_width);
        if let Some(p) = self.miss_penalty {
            config = config.with_miss_penalty(p);
        }
        let w = &self.workload;
        let source = match self.trace {
            Some(path) => TraceSource::File(path),
            None => TraceSource::Generated(
                WorkloadSpec::new(w.indexes, w.refs, w.seed.unwrap_or(DEFAULT_SEED))
                    .with_write_probability(w.write_prob),
            ),
        };
        RunArgs {
            policy: self.policy,
            config,
            source,
            show_process: self.show_process,
            debug: self.debug,
            default_seed: w.seed.is_none(),
            log: !self.no_log,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepCmd {
    /// Swept parameter: frames, indexes or refs.
    #[arg(long, required_unless_present = "perturbed_control")]
    pub axis: Option<Axis>,
    /// Explicit axis values (comma separated); default is 10..=100.
    #[arg(long, value_delimiter = ',')]
    pub points: Vec<u64>,
    /// Use the 1e3..1e5 scale instead of 10..100.
    #[arg(long)]
    pub large: bool,
    /// Add the 1e6 point to the large scale.
    #[arg(long, requires = "large")]
    pub full_scale: bool,
    #[arg(long, default_value_t = 10)]
    pub frames: usize,
    #[arg(long, default_value_t = 100)]
    pub indexes: u32,
    #[arg(long, default_value_t = 1000)]
    pub refs: u64,
    /// Policies to compare (comma separated).
    #[arg(long, value_delimiter = ',', value_parser = parse_policy, default_value = "aging,aging-n")]
    pub policies: Vec<PolicyId>,
    /// Level speeds for N-level policies.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub speeds: Vec<f64>,
    #[arg(long, default_value_t = bench::DEFAULT_SEED_COUNT)]
    pub seeds: usize,
    #[arg(long, default_value_t = bench::DEFAULT_SEED_BASE)]
    pub seed_base: u64,
    #[arg(long, default_value_t = HierarchyConfig::DEFAULT_TICK_PERIOD)]
    pub tick_period: u32,
    /// Compare AGING_N with the perturbed level mapping at fixed F, I, refs.
    #[arg(long)]
    pub perturbed_control: bool,
    /// CSV output (overwritten).
    #[arg(long, short, default_value = "sweep.csv")]
    pub output: PathBuf,
}

impl SweepCmd {
    pub fn spec(&self) -> SweepSpec {
        let points = if self.points.is_empty() {
            bench::scale_points(self.large, self.full_scale)
        } else {
            self.points.clone()
        };
        SweepSpec {
            axis: self.axis.unwrap_or(Axis::Refs),
            points,
            frames: self.frames,
            indexes: self.indexes,
            refs: self.refs,
            policies: self.policies.clone(),
            speeds: self.speeds.clone(),
            seeds: (self.seed_base..self.seed_base + self.seeds as u64).collect(),
            tick_period: self.tick_period,
            write_probability: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct GenTraceCmd {
    #[command(flatten)]
    pub workload: WorkloadArgs,
    #[arg(long, short)]
    pub output: PathBuf,
}

/// Parses a full argument vector (without the program name).
pub fn parse(args: &[String]) -> Result<Invocation, UsageError> {
    match args.first().map(String::as_str) {
        None | Some("-h" | "--help" | "help") => Ok(Invocation::Help),
        Some(first) if SUBCOMMANDS.contains(&first) => {
            let argv = std::iter::once("dememory".to_string()).chain(args.iter().cloned());
            let cli = Cli::try_parse_from(argv).map_err(|e| usage_err(e.to_string()))?;
            Ok(match cli.command {
                Command::Simulate(cmd) => Invocation::Run(cmd.into_run()),
                Command::Sweep(cmd) => Invocation::Sweep(cmd),
                Command::GenTrace(cmd) => Invocation::GenTrace(cmd),
            })
        }
        Some(_) => parse_compat(args).map(Invocation::Run),
    }
}

struct Printer<'a> {
    out: &'a mut dyn Write,
    show_process: bool,
    debug: bool,
}

fn kind_char(kind: AccessKind) -> char {
    match kind {
        AccessKind::Read => 'R',
        AccessKind::Write => 'W',
    }
}

impl Observer for Printer<'_> {
    fn observe(&mut self, access: &Access, outcome: &AccessOutcome, sim: &Simulation<'_>) {
        let result = match outcome.result {
            Resolution::Hit(l) => format!("hit L{l}"),
            Resolution::Miss => "miss".to_string(),
        };
        let _ = writeln!(
            self.out,
            "#{} {} {}: {result}",
            access.sequence,
            kind_char(access.kind),
            access.page
        );
        if self.debug {
            for m in &outcome.migrations {
                let _ = writeln!(self.out, "  move page {} {} -> {}", m.page, m.from, m.to);
            }
        }
        if self.show_process {
            let snap = format_snapshot(sim.state(), sim.config().counter_width_bits);
            let _ = self.out.write_all(snap.as_bytes());
            let r = sim.report();
            let _ = writeln!(
                self.out,
                "  hits={} misses={} ratio={}",
                r.hits,
                r.misses,
                r.hit_miss_ratio()
            );
        }
    }
}

/// Final statistics block. Only the `elapsed` line varies between
/// identical runs.
pub fn format_summary(report: &SimReport, config: &HierarchyConfig, default_seed: bool) -> String {
    let join = |v: Vec<String>| v.join(":");
    let frames = join(
        report
            .frames_per_level
            .iter()
            .map(|f| f.to_string())
            .collect(),
    );
    let speeds = join(
        config
            .levels
            .iter()
            .map(|l| l.speed_factor.to_string())
            .collect(),
    );
    let seed = match (report.seed, default_seed) {
        (Some(s), true) => format!("{s} (default)"),
        (Some(s), false) => s.to_string(),
        (None, _) => "- (trace file)".to_string(),
    };
    let per_level = report
        .hits_per_level
        .iter()
        .enumerate()
        .map(|(i, h)| format!("L{}={h}", i + 1))
        .collect::<Vec<_>>()
        .join(" ");
    format!(
        "algorithm: {}\nlevels: {} (frames {frames}, speeds {speeds})\nindexes: {}\nreferences: {}\nseed: {seed}\nhits: {}\nmisses: {}\nhits per level: {per_level}\nhit/miss ratio: {}\nhit rate: {:.6}\nweighted cost: {:.3}\nelapsed: {:.3} ms\n",
        report.policy,
        report.levels(),
        report.indexes,
        report.refs,
        report.hits,
        report.misses,
        report.hit_miss_ratio(),
        report.hit_rate(),
        report.weighted_cost,
        report.elapsed.as_secs_f64() * 1e3,
    )
}

fn load(source: &TraceSource) -> Result<(ReferenceTrace, Option<WorkloadSpec>), Error> {
    match source {
        TraceSource::Generated(spec) => Ok((generate_trace(spec)?, Some(*spec))),
        TraceSource::File(path) => Ok((trace_io::read_trace(path)?, None)),
    }
}

pub fn execute_run(args: &RunArgs, out: &mut dyn Write) -> Result<SimReport, Error> {
    let (trace, workload) = load(&args.source)?;
    let report = if args.show_process || args.debug {
        let mut printer = Printer {
            out: &mut *out,
            show_process: args.show_process,
            debug: args.debug,
        };
        crate::simulate(
            args.config.clone(),
            args.policy,
            &trace,
            workload.as_ref(),
            Some(&mut printer),
        )?
    } else {
        crate::simulate(
            args.config.clone(),
            args.policy,
            &trace,
            workload.as_ref(),
            None,
        )?
    };
    let _ = out.write_all(format_summary(&report, &args.config, args.default_seed).as_bytes());
    if args.log {
        log::append_log(&report, &log::log_path())?;
    }
    Ok(report)
}

fn execute(inv: &Invocation, out: &mut dyn Write) -> Result<(), Error> {
    match inv {
        Invocation::Help => {
            let _ = out.write_all(usage().as_bytes());
        }
        Invocation::Run(args) => {
            execute_run(args, out)?;
        }
        Invocation::Sweep(cmd) if cmd.perturbed_control => {
            let seeds: Vec<u64> = (cmd.seed_base..cmd.seed_base + cmd.seeds as u64).collect();
            let cmp = bench::compare_perturbed(
                cmd.frames,
                cmd.indexes,
                cmd.refs,
                &seeds,
                cmd.tick_period,
            )?;
            std::fs::write(&cmd.output, cmp.to_csv()).map_err(|e| Error::io(&cmd.output, e))?;
            let _ = writeln!(
                out,
                "AGING_N mean ratio {:.6}, AGING_N_PERTURBED mean ratio {:.6}, difference {:.6}\nwrote {}",
                cmp.mean_correct,
                cmp.mean_perturbed,
                cmp.mean_difference(),
                cmd.output.display()
            );
        }
        Invocation::Sweep(cmd) => {
            let table = bench::run_sweep(&cmd.spec())?;
            table.write_csv(&cmd.output)?;
            let failures = table.failures().count();
            let _ = writeln!(
                out,
                "wrote {} rows to {}{}",
                table.rows.len() + table.aggregates.len(),
                cmd.output.display(),
                if failures > 0 {
                    format!(" ({failures} failed cells)")
                } else {
                    String::new()
                }
            );
        }
        Invocation::GenTrace(cmd) => {
            let w = &cmd.workload;
            let spec = WorkloadSpec::new(w.indexes, w.refs, w.seed.unwrap_or(DEFAULT_SEED))
                .with_write_probability(w.write_prob);
            let trace = generate_trace(&spec)?;
            trace_io::write_trace(&trace, &cmd.output)?;
            let _ = writeln!(
                out,
                "wrote {} references (seed {}) to {}",
                trace.len(),
                spec.seed,
                cmd.output.display()
            );
        }
    }
    Ok(())
}

/// Runs the CLI and returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let inv = match parse(args) {
        Ok(inv) => inv,
        Err(e) => {
            let _ = writeln!(err, "error: {e}\n");
            if !args
                .first()
                .is_some_and(|a| SUBCOMMANDS.contains(&a.as_str()))
            {
                let _ = err.write_all(usage().as_bytes());
            }
            return 2;
        }
    };
    match execute(&inv, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
