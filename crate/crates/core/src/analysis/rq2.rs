use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::metrics::Metric;
use crate::stats::{bh_adjust, empirical_quantile, ks_two_sample};

use super::{AnalysisError, MetricTimeline};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BhScope {
    /// Adjust across the developers tested in each cell.
    Cell,
    /// Adjust across every test of the grid at once.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rq2Params {
    pub q_low: f64,
    pub q_high: f64,
    pub min_dev_commits: usize,
    pub alpha: f64,
    pub bh_scope: BhScope,
}

impl Default for Rq2Params {
    fn default() -> Self {
        Rq2Params { q_low: 0.25, q_high: 0.75, min_dev_commits: 10, alpha: 0.05, bh_scope: BhScope::Cell }
    }
}

impl Rq2Params {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(0.0..=1.0).contains(&self.q_low) || !(0.0..=1.0).contains(&self.q_high) || self.q_low >= self.q_high {
            return Err(AnalysisError::Invalid(format!(
                "quantiles must satisfy 0 <= low < high <= 1, got {},{}",
                self.q_low, self.q_high
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(AnalysisError::Invalid(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if self.min_dev_commits == 0 {
            return Err(AnalysisError::Invalid("min developer commits must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub group_metric: Metric,
    pub test_metric: Metric,
    /// `None` when no developer qualified for testing.
    pub pct_developers: Option<f64>,
    pub n_significant: usize,
    pub n_developers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    Top,
    Bottom,
}

/// Top/bottom assignment of every file of one project for one metric, from
/// the files' first recorded values.
pub fn quantile_groups(files: &[MetricTimeline], metric: Metric, p: &Rq2Params) -> Vec<Option<Group>> {
    let first: Vec<f64> = files.iter().filter(|t| !t.is_empty()).map(|t| t.values[0][metric.index()]).collect();
    groups_from_first(&first, p)
}

fn groups(files: &[&MetricTimeline], metric: Metric, p: &Rq2Params) -> Vec<Option<Group>> {
    let first: Vec<f64> = files.iter().map(|t| t.values[0][metric.index()]).collect();
    groups_from_first(&first, p)
}

fn groups_from_first(first: &[f64], p: &Rq2Params) -> Vec<Option<Group>> {
    let (Ok(lo), Ok(hi)) = (empirical_quantile(first, p.q_low), empirical_quantile(first, p.q_high)) else {
        return vec![None; first.len()];
    };
    first
        .iter()
        .map(|&v| match (v <= lo, v >= hi) {
            (true, false) => Some(Group::Bottom),
            (false, true) => Some(Group::Top),
            // Files in the middle, or in both tails when the quantiles tie.
            _ => None,
        })
        .collect()
}

/// p-values of the developers tested in one cell of one project.
fn cell_tests(files: &[&MetricTimeline], grouping: &[Option<Group>], test: Metric, p: &Rq2Params) -> Vec<f64> {
    let mut deltas: BTreeMap<String, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (t, g) in files.iter().zip(grouping) {
        let Some(g) = g else { continue };
        for i in 1..t.len() {
            let d = t.values[i][test.index()] - t.values[i - 1][test.index()];
            let entry = deltas.entry(t.committers[i].to_lowercase()).or_default();
            match g {
                Group::Top => entry.0.push(d),
                Group::Bottom => entry.1.push(d),
            }
        }
    }
    deltas
        .values()
        .filter(|(top, bottom)| top.len() >= p.min_dev_commits && bottom.len() >= p.min_dev_commits)
        .map(|(top, bottom)| ks_two_sample(top, bottom).expect("non-empty samples").p_value)
        .collect()
}

/// Percentage of developers whose commit deltas of the test metric differ
/// between the top and bottom files of the grouping metric, for all 121
/// metric pairs.
pub fn rq2(timelines: &[MetricTimeline], params: &Rq2Params) -> Result<Vec<HeatmapCell>, AnalysisError> {
    params.validate()?;
    let projects: BTreeSet<&str> = timelines.iter().map(|t| t.repo.as_str()).collect();
    let by_project: Vec<Vec<&MetricTimeline>> = projects
        .iter()
        .map(|r| timelines.iter().filter(|t| t.repo == *r && !t.is_empty()).collect())
        .collect();

    let pairs: Vec<(Metric, Metric)> =
        Metric::ALL.iter().flat_map(|&g| Metric::ALL.iter().map(move |&t| (g, t))).collect();
    let pvalues: Vec<Vec<f64>> = pairs
        .par_iter()
        .map(|&(g, t)| {
            by_project
                .iter()
                .flat_map(|files| cell_tests(files, &groups(files, g, params), t, params))
                .collect()
        })
        .collect();

    let adjusted: Vec<Vec<f64>> = match params.bh_scope {
        BhScope::Cell => pvalues.iter().map(|p| bh_adjust(p)).collect(),
        BhScope::Global => {
            let flat = bh_adjust(&pvalues.concat());
            let mut rest = flat.as_slice();
            pvalues
                .iter()
                .map(|p| {
                    let (head, tail) = rest.split_at(p.len());
                    rest = tail;
                    head.to_vec()
                })
                .collect()
        }
    };

    Ok(pairs
        .iter()
        .zip(adjusted)
        .map(|(&(g, t), adj)| {
            let n_significant = adj.iter().filter(|&&q| q < params.alpha).count();
            HeatmapCell {
                group_metric: g,
                test_metric: t,
                pct_developers: (!adj.is_empty()).then(|| 100.0 * n_significant as f64 / adj.len() as f64),
                n_significant,
                n_developers: adj.len(),
            }
        })
        .collect())
}
