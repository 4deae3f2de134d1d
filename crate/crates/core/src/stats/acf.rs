use super::{chi2_sf, StatsError};

/// Sample autocorrelation at lags `1..=max_lag`.
pub fn acf(series: &[f64], max_lag: usize) -> Result<Vec<f64>, StatsError> {
    let n = series.len();
    if n < 2 || max_lag >= n {
        return Err(StatsError::TooShort { n, lag: max_lag });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(StatsError::Invalid("non-finite value in series".into()));
    }
    if series.iter().all(|&v| v == series[0]) {
        return Err(StatsError::ConstantSeries);
    }
    let mean = series.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    if denom == 0.0 {
        return Err(StatsError::ConstantSeries);
    }
    Ok((1..=max_lag)
        .map(|k| {
            let num: f64 = centered.iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
            num / denom
        })
        .collect())
}

/// Largest lag tested for a series of length `n`.
pub fn effective_max_lag(n: usize, max_lag: usize) -> usize {
    max_lag.min(n.saturating_sub(2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagTest {
    pub lag: usize,
    pub rho: f64,
    pub q_stat: f64,
    pub p_value: f64,
}

/// Ljung-Box statistic over the first `h` autocorrelations of a series of
/// length `n`, with its chi-square (h degrees of freedom) p-value.
pub fn ljung_box(rho: &[f64], n: usize, h: usize) -> Result<(f64, f64), StatsError> {
    if h == 0 || h > rho.len() || n <= h {
        return Err(StatsError::Invalid(format!("ljung_box needs 1 <= h < n, h <= {} (h={h}, n={n})", rho.len())));
    }
    let q = q_terms(rho, n).take(h).sum::<f64>() * (n * (n + 2)) as f64;
    Ok((q, chi2_sf(q, h as f64)))
}

fn q_terms(rho: &[f64], n: usize) -> impl Iterator<Item = f64> + '_ {
    rho.iter().enumerate().map(move |(i, r)| r * r / (n - (i + 1)) as f64)
}

/// Ljung-Box test at every lag `1..=rho.len()`.
pub fn ljung_box_per_lag(rho: &[f64], n: usize) -> Result<Vec<LagTest>, StatsError> {
    if n <= rho.len() {
        return Err(StatsError::TooShort { n, lag: rho.len() });
    }
    let scale = (n * (n + 2)) as f64;
    let mut sum = 0.0;
    Ok(q_terms(rho, n)
        .enumerate()
        .map(|(i, term)| {
            sum += term;
            let q = scale * sum;
            LagTest { lag: i + 1, rho: rho[i], q_stat: q, p_value: chi2_sf(q, (i + 1) as f64) }
        })
        .collect())
}
