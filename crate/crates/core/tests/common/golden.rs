//! Loader for the hand-counted golden corpus in `tests/fixtures/golden`.
//!
//! Each `NAME.c` has a `NAME.golden` listing `field value` lines for
//! `SourceMetrics` and `rule a b` lines for style counters. Fields that are
//! not listed are expected to be zero. Values may be written as `p*q/r`
//! products, evaluated left to right in `f64`.

use std::path::{Path, PathBuf};

use cqual::metrics::METRIC_COLUMNS;
use cqual::{Measurement, SourceMetrics, StyleCounts, StyleRule};

pub struct GoldenCase {
    pub name: String,
    pub source: Vec<u8>,
    pub metrics: SourceMetrics,
    pub style: StyleCounts,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden")
}

fn eval(expr: &str) -> f64 {
    let mut value: Option<f64> = None;
    let mut op = '*';
    let mut num = String::new();
    let apply = |value: Option<f64>, op: char, num: &str| {
        let n: f64 = num.trim().parse().unwrap_or_else(|_| panic!("bad number `{num}`"));
        match (value, op) {
            (None, _) => n,
            (Some(v), '*') => v * n,
            (Some(v), '/') => v / n,
            _ => unreachable!(),
        }
    };
    for c in expr.chars() {
        if c == '*' || c == '/' {
            value = Some(apply(value, op, &num));
            op = c;
            num.clear();
        } else {
            num.push(c);
        }
    }
    apply(value, op, &num)
}

pub fn load() -> Vec<GoldenCase> {
    let dir = golden_dir();
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .expect("golden dir")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "c").then(|| p.file_stem()?.to_str().map(str::to_owned))?
        })
        .collect();
    names.sort();
    names
        .into_iter()
        .map(|name| {
            let source = std::fs::read(dir.join(format!("{name}.c"))).unwrap();
            let text = std::fs::read_to_string(dir.join(format!("{name}.golden"))).unwrap();
            let mut counts = [0u64; 12];
            let mut ratios = [0f64; 9];
            let mut style = StyleCounts::default();
            for line in text.lines().map(str::trim) {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let parts: Vec<&str> = line.split_whitespace().collect();
                if let Some(i) = METRIC_COLUMNS.iter().position(|c| *c == parts[0]) {
                    assert_eq!(parts.len(), 2, "{name}: {line}");
                    if i < 12 {
                        counts[i] = parts[1].parse().unwrap();
                    } else {
                        ratios[i - 12] = eval(parts[1]);
                    }
                } else {
                    let rule: StyleRule = parts[0].parse().unwrap();
                    assert_eq!(parts.len(), 3, "{name}: {line}");
                    style.set(rule, parts[1].parse().unwrap(), parts[2].parse().unwrap());
                }
            }
            GoldenCase {
                name,
                source,
                metrics: SourceMetrics::from_parts(counts, ratios),
                style,
            }
        })
        .collect()
}

/// Field-by-field differences between a measurement and the golden record.
pub fn diff(case: &GoldenCase, got: &Measurement) -> Vec<String> {
    let mut out = Vec::new();
    let (gc, ec) = (got.metrics.counts(), case.metrics.counts());
    for i in 0..12 {
        if gc[i] != ec[i] {
            out.push(format!("{}: got {} want {}", METRIC_COLUMNS[i], gc[i], ec[i]));
        }
    }
    let (gr, er) = (got.metrics.ratios(), case.metrics.ratios());
    for i in 0..9 {
        if gr[i].to_bits() != er[i].to_bits() {
            out.push(format!("{}: got {} want {}", METRIC_COLUMNS[12 + i], gr[i], er[i]));
        }
    }
    for rule in StyleRule::ALL {
        let (g, e) = (got.style.get(rule), case.style.get(rule));
        if g != e {
            out.push(format!("{rule}: got ({}, {}) want ({}, {})", g.a, g.b, e.a, e.b));
        }
    }
    out
}
