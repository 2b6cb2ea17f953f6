//! The append-only CSV results log.
//!
//! One line per run:
//! `timestamp_iso8601,policy,levels,frames_per_level,indexes,refs,seed,hits,misses,hit_miss_ratio,hit_rate,weighted_cost,elapsed_ms`
//! where `frames_per_level` is colon-separated (`10:10:10`) and `seed` is
//! empty for runs over a trace file.

use std::env;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{DateTime, SecondsFormat, Utc};
use dememory_core::SimReport;

use crate::error::Error;

pub const DEFAULT_LOG: &str = "dememory.log";
pub const LOG_ENV: &str = "DEMEMORY_LOG";
pub const FIELDS: usize = 13;

/// `$DEMEMORY_LOG`, else `dememory.log` in the working directory.
pub fn log_path() -> PathBuf {
    env::var_os(LOG_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_LOG))
}

pub fn format_log_line(report: &SimReport, at: DateTime<Utc>) -> String {
    let frames = report
        .frames_per_level
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(":");
    let seed = report.seed.map(|s| s.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{},{},{},{},{:.6},{:.3},{:.3}\n",
        at.to_rfc3339_opts(SecondsFormat::Secs, true),
        report.policy,
        report.levels(),
        frames,
        report.indexes,
        report.refs,
        seed,
        report.hits,
        report.misses,
        report.hit_miss_ratio(),
        report.hit_rate(),
        report.weighted_cost,
        report.elapsed.as_secs_f64() * 1e3,
    )
}

/// Appends one line; existing content is never touched.
pub fn append_log(report: &SimReport, path: &Path) -> Result<(), Error> {
    let line = format_log_line(report, Utc::now());
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    file.write_all(line.as_bytes())
        .map_err(|e| Error::io(path, e))
}
