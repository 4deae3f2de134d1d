//! Timeline TSV files: one header row, one row per revision.

use std::io::{BufRead, Write};

use crate::metrics::{SourceMetrics, METRIC_COLUMNS};
use crate::style::StyleCounts;

use super::{HistoryError, RevisionRecord, Timeline};

pub const KEY_COLUMNS: [&str; 5] = ["repo", "path", "commit", "committer", "timestamp"];

pub fn header() -> Vec<String> {
    KEY_COLUMNS
        .iter()
        .chain(METRIC_COLUMNS.iter())
        .map(|s| s.to_string())
        .chain(StyleCounts::column_names())
        .collect()
}

/// Escapes backslash, tab, newline and carriage return.
pub fn escape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    for c in field.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(field: &str) -> String {
    let mut out = String::with_capacity(field.len());
    let mut chars = field.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

pub fn write_timelines<W: Write>(mut w: W, timelines: &[Timeline]) -> std::io::Result<()> {
    writeln!(w, "{}", header().join("\t"))?;
    for t in timelines {
        for r in &t.records {
            write!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                escape(&r.repo),
                escape(&r.path),
                r.commit,
                escape(&r.committer),
                r.timestamp
            )?;
            for c in r.metrics.counts() {
                write!(w, "\t{c}")?;
            }
            for x in r.metrics.ratios() {
                write!(w, "\t{x}")?;
            }
            for v in r.style.values() {
                write!(w, "\t{v}")?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Reads a full-schema timeline file, checking every row against the header.
/// Consecutive rows with the same (repo, path) form one timeline.
pub fn read_timelines<R: BufRead>(r: R) -> Result<Vec<Timeline>, HistoryError> {
    let mut lines = r.lines();
    let bad = |line: usize, msg: String| HistoryError::Parse(format!("line {line}: {msg}"));
    let head = lines.next().ok_or_else(|| bad(1, "missing header".into()))?.map_err(HistoryError::Io)?;
    if head.split('\t').collect::<Vec<_>>() != header() {
        return Err(bad(1, "header does not match the timeline schema".into()));
    }
    let mut timelines: Vec<Timeline> = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line.map_err(HistoryError::Io)?;
        let n = i + 2;
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != header().len() {
            return Err(bad(n, format!("{} fields, expected {}", f.len(), header().len())));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|_| bad(n, format!("bad count `{s}`")));
        let mut counts = [0u64; 12];
        for (k, c) in counts.iter_mut().enumerate() {
            *c = int(f[5 + k])?;
        }
        let mut ratios = [0f64; 9];
        for (k, x) in ratios.iter_mut().enumerate() {
            *x = f[17 + k].parse().map_err(|_| bad(n, format!("bad ratio `{}`", f[17 + k])))?;
        }
        let style_vals = f[26..].iter().map(|s| int(s)).collect::<Result<Vec<_>, _>>()?;
        if f[2].len() != 40 || !f[2].bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(bad(n, format!("bad commit `{}`", f[2])));
        }
        let record = RevisionRecord {
            repo: unescape(f[0]),
            path: unescape(f[1]),
            commit: f[2].to_owned(),
            committer: unescape(f[3]),
            timestamp: f[4].parse().map_err(|_| bad(n, format!("bad timestamp `{}`", f[4])))?,
            metrics: SourceMetrics::from_parts(counts, ratios),
            style: StyleCounts::from_values(&style_vals).expect("40 style values"),
        };
        match timelines.last_mut() {
            Some(t) if t.repo == record.repo && t.path == record.path => t.records.push(record),
            _ => timelines.push(Timeline {
                repo: record.repo.clone(),
                path: record.path.clone(),
                records: vec![record],
            }),
        }
    }
    Ok(timelines)
}
