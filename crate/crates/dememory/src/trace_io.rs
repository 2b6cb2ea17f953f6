//! Plain-text traces: one access per line, `R <page>` or `W <page>`.
//! Lines starting with `#` are comments; blank lines are skipped.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use dememory_core::{AccessKind, PageId, ReferenceTrace};

use crate::error::Error;

/// Parse failure, 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

pub fn parse_line(line: &str) -> Result<Option<(AccessKind, PageId)>, String> {
    let line = line.trim_end_matches('\r');
    if line.trim().is_empty() || line.starts_with('#') {
        return Ok(None);
    }
    let mut parts = line.split_whitespace();
    let kind = match parts.next() {
        Some("R") => AccessKind::Read,
        Some("W") => AccessKind::Write,
        Some(other) => return Err(format!("unknown access kind {other:?}, expected R or W")),
        None => unreachable!("non-blank line has a token"),
    };
    let page = parts
        .next()
        .ok_or_else(|| "missing page index".to_string())?
        .parse::<u32>()
        .map_err(|e| format!("bad page index: {e}"))?;
    if let Some(extra) = parts.next() {
        return Err(format!("unexpected trailing field {extra:?}"));
    }
    Ok(Some((kind, PageId(page))))
}

pub fn parse_trace<R: BufRead>(reader: R) -> Result<ReferenceTrace, ParseError> {
    let mut trace = ReferenceTrace::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| ParseError {
            line: i + 1,
            reason: e.to_string(),
        })?;
        match parse_line(&line) {
            Ok(Some((kind, page))) => trace.push(page, kind),
            Ok(None) => {}
            Err(reason) => {
                return Err(ParseError {
                    line: i + 1,
                    reason,
                })
            }
        }
    }
    Ok(trace)
}

pub fn read_trace(path: &Path) -> Result<ReferenceTrace, Error> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_trace(BufReader::new(file)).map_err(|e| Error::TraceParse {
        path: path.to_owned(),
        line: e.line,
        reason: e.reason,
    })
}

pub fn format_trace(trace: &ReferenceTrace) -> String {
    let mut out = String::with_capacity(trace.len() * 6);
    for a in trace {
        let kind = match a.kind {
            AccessKind::Read => 'R',
            AccessKind::Write => 'W',
        };
        out.push(kind);
        out.push(' ');
        out.push_str(&a.page.to_string());
        out.push('\n');
    }
    out
}

pub fn write_trace(trace: &ReferenceTrace, path: &Path) -> Result<(), Error> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(format_trace(trace).as_bytes())
        .map_err(|e| Error::io(path, e))
}
