//! Compilation-free quality metrics for C source files, mined across git
//! history, plus the statistics used to study how a file's past quality
//! relates to its future quality and to developers' commits.

pub mod analysis;
pub mod cli;
pub mod history;
pub mod lexer;
pub mod metrics;
pub mod sampler;
pub mod stats;
pub mod structure;
pub mod style;

pub use metrics::{compute_metrics, measure, Measurement, Metric, SourceMetrics};
pub use style::{style_inconsistency, StyleCounts, StyleRule};
