use rayon::prelude::*;

use crate::metrics::Metric;
use crate::stats::{acf, effective_max_lag, ljung_box_per_lag};

use super::{AnalysisError, MetricTimeline};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rq1Params {
    pub max_lag: usize,
    pub threshold: f64,
    pub alpha: f64,
    /// Files need strictly more revisions than this.
    pub min_commits: usize,
}

impl Default for Rq1Params {
    fn default() -> Self {
        Rq1Params { max_lag: 50, threshold: 0.5, alpha: 0.05, min_commits: 50 }
    }
}

impl Rq1Params {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if self.max_lag == 0 {
            return Err(AnalysisError::Invalid("max lag must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(AnalysisError::Invalid(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if !(-1.0..=1.0).contains(&self.threshold) {
            return Err(AnalysisError::Invalid(format!("threshold {} outside [-1, 1]", self.threshold)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rq1Row {
    pub metric: Metric,
    pub lag: usize,
    /// `None` when no eligible file reaches this lag.
    pub pct_files: Option<f64>,
    /// Files with a significant autocorrelation above the threshold.
    pub n_files: usize,
    /// Eligible files long enough to be tested at this lag.
    pub n_eligible: usize,
}

fn metric_rows(timelines: &[MetricTimeline], metric: Metric, p: &Rq1Params) -> Vec<Rq1Row> {
    let mut hits = vec![0usize; p.max_lag + 1];
    let mut tested = vec![0usize; p.max_lag + 1];
    for t in timelines.iter().filter(|t| t.len() > p.min_commits) {
        let series = t.series(metric);
        let lag = effective_max_lag(series.len(), p.max_lag);
        if lag == 0 {
            continue;
        }
        let Ok(rho) = acf(&series, lag) else { continue };
        let tests = ljung_box_per_lag(&rho, series.len()).expect("lag below series length");
        for test in tests {
            tested[test.lag] += 1;
            if test.rho > p.threshold && test.p_value < p.alpha {
                hits[test.lag] += 1;
            }
        }
    }
    (1..=p.max_lag)
        .map(|lag| Rq1Row {
            metric,
            lag,
            pct_files: (tested[lag] > 0).then(|| 100.0 * hits[lag] as f64 / tested[lag] as f64),
            n_files: hits[lag],
            n_eligible: tested[lag],
        })
        .collect()
}

/// Share of files whose metric series is significantly autocorrelated above
/// the threshold, per metric and lag.
pub fn rq1(timelines: &[MetricTimeline], params: &Rq1Params) -> Result<Vec<Rq1Row>, AnalysisError> {
    params.validate()?;
    Ok(Metric::ALL
        .par_iter()
        .map(|&m| metric_rows(timelines, m, params))
        .collect::<Vec<_>>()
        .concat())
}
