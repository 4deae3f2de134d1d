//! Statistical primitives used by the history analyses.

mod acf;
mod bh;
mod gamma;
mod ks;
mod quantile;

pub use acf::{acf, effective_max_lag, ljung_box, ljung_box_per_lag, LagTest};
pub use bh::bh_adjust;
pub use gamma::{chi2_sf, ln_gamma, regularized_gamma_p, regularized_gamma_q};
pub use ks::{kolmogorov_sf, ks_statistic, ks_two_sample, KsResult};
pub use quantile::empirical_quantile;

/// Smallest p-value ever reported; smaller values are clamped to it.
pub const P_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatsError {
    #[error("undefined autocorrelation: series is constant")]
    ConstantSeries,
    #[error("series too short: {n} values for lag {lag}")]
    TooShort { n: usize, lag: usize },
    #[error("empty sample")]
    Empty,
    #[error("invalid argument: {0}")]
    Invalid(String),
}
