//! The two history analyses: autocorrelation of each file's metric series
//! (`rq1`) and developers' commit deltas in high- versus low-quality files
//! (`rq2`).

mod figures;
mod rq1;
mod rq2;
pub mod synth;
mod timeline;

pub use figures::{rq1_csv, rq1_svg, rq2_csv, rq2_svg, write_figures, Format};
pub use rq1::{rq1, Rq1Params, Rq1Row};
pub use rq2::{quantile_groups, rq2, BhScope, Group, HeatmapCell, Rq2Params};
pub use timeline::{load_timelines, read_metric_timelines, write_metric_timelines, MetricTimeline};

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("no input timelines match `{0}`")]
    NoInput(String),
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
