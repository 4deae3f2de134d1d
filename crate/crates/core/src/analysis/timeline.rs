use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::history::tsv::{escape, unescape};
use crate::history::Timeline;
use crate::metrics::Metric;

use super::AnalysisError;

/// The per-revision values of the eleven metrics for one file.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTimeline {
    pub repo: String,
    pub path: String,
    /// Committer of each revision, as recorded.
    pub committers: Vec<String>,
    /// One row per revision, indexed by [`Metric::index`].
    pub values: Vec<[f64; Metric::COUNT]>,
}

impl MetricTimeline {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn series(&self, metric: Metric) -> Vec<f64> {
        self.values.iter().map(|v| v[metric.index()]).collect()
    }
}

impl From<&Timeline> for MetricTimeline {
    fn from(t: &Timeline) -> Self {
        MetricTimeline {
            repo: t.repo.clone(),
            path: t.path.clone(),
            committers: t.records.iter().map(|r| r.committer.clone()).collect(),
            values: t
                .records
                .iter()
                .map(|r| Metric::ALL.map(|m| r.metrics.get(m)))
                .collect(),
        }
    }
}

/// Reads a timeline TSV, using only the `repo`, `path`, `committer` and
/// metric columns. Works with mined files and with synthetic ones.
pub fn read_metric_timelines<R: BufRead>(reader: R, source: &Path) -> Result<Vec<MetricTimeline>, AnalysisError> {
    let err = |msg: String| AnalysisError::Parse { path: source.to_path_buf(), msg };
    let mut lines = reader.lines();
    let header = match lines.next() {
        Some(h) => h?,
        None => return Err(err("empty file".into())),
    };
    let cols: Vec<&str> = header.split('\t').collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| err(format!("missing column `{name}`")))
    };
    let (repo_i, path_i, who_i) = (find("repo")?, find("path")?, find("committer")?);
    let metric_i: Vec<usize> = Metric::ALL.iter().map(|m| find(m.column())).collect::<Result<_, _>>()?;

    let mut out: Vec<MetricTimeline> = Vec::new();
    let mut index: HashMap<(String, String), usize> = HashMap::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != cols.len() {
            return Err(err(format!("line {}: {} fields, expected {}", n + 2, f.len(), cols.len())));
        }
        let mut row = [0.0; Metric::COUNT];
        for (slot, &i) in row.iter_mut().zip(&metric_i) {
            *slot = f[i]
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| err(format!("line {}: bad value `{}`", n + 2, f[i])))?;
        }
        let key = (unescape(f[repo_i]), unescape(f[path_i]));
        let at = *index.entry(key.clone()).or_insert_with(|| {
            out.push(MetricTimeline { repo: key.0, path: key.1, committers: Vec::new(), values: Vec::new() });
            out.len() - 1
        });
        out[at].committers.push(unescape(f[who_i]));
        out[at].values.push(row);
    }
    Ok(out)
}

/// All timelines from the files matching a glob pattern, in path order.
pub fn load_timelines(pattern: &str) -> Result<Vec<MetricTimeline>, AnalysisError> {
    let paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| AnalysisError::Invalid(format!("bad glob `{pattern}`: {e}")))?
        .filter_map(Result::ok)
        .filter(|p| p.is_file())
        .collect();
    if paths.is_empty() {
        return Err(AnalysisError::NoInput(pattern.to_owned()));
    }
    let mut all = Vec::new();
    for p in paths {
        let file = std::fs::File::open(&p)?;
        all.extend(read_metric_timelines(BufReader::new(file), &p)?);
    }
    Ok(all)
}

/// Minimal timeline schema: keys plus the eleven metric columns.
pub fn write_metric_timelines<W: Write>(mut w: W, timelines: &[MetricTimeline]) -> std::io::Result<()> {
    let mut header = vec!["repo", "path", "commit", "committer", "timestamp"];
    header.extend(Metric::ALL.iter().map(|m| m.column()));
    writeln!(w, "{}", header.join("\t"))?;
    let mut serial = 0u64;
    for t in timelines {
        for (who, row) in t.committers.iter().zip(&t.values) {
            serial += 1;
            write!(w, "{}\t{}\t{:040x}\t{}\t{}", escape(&t.repo), escape(&t.path), serial, escape(who), serial)?;
            for v in row {
                write!(w, "\t{v}")?;
            }
            writeln!(w)?;
        }
    }
    Ok(())
}
