//! Independent reference implementations used to check the statistics
//! module. Deliberately naive.

/// Autocorrelation by the direct double loop.
#[allow(clippy::needless_range_loop)]
pub fn acf_direct(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mut mean = 0.0;
    for v in x {
        mean += v;
    }
    mean /= n as f64;
    let mut den = 0.0;
    for t in 0..n {
        den += (x[t] - mean) * (x[t] - mean);
    }
    let mut out = Vec::new();
    for k in 1..=max_lag {
        let mut num = 0.0;
        for t in 0..n - k {
            num += (x[t] - mean) * (x[t + k] - mean);
        }
        out.push(num / den);
    }
    out
}

fn ecdf(sample: &[f64], at: f64) -> f64 {
    sample.iter().filter(|&&v| v <= at).count() as f64 / sample.len() as f64
}

/// KS distance by evaluating both ECDFs at every sample point.
pub fn ks_d_enumerated(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .chain(y)
        .map(|&p| (ecdf(x, p) - ecdf(y, p)).abs())
        .fold(0.0, f64::max)
}

/// Gamma(df / 2) by the recurrence from Gamma(1) or Gamma(1/2).
fn gamma_half(df: u32) -> f64 {
    let (mut x, mut g) = if df.is_multiple_of(2) { (1.0, 1.0) } else { (0.5, std::f64::consts::PI.sqrt()) };
    while x < df as f64 / 2.0 {
        g *= x;
        x += 1.0;
    }
    g
}

#[allow(clippy::too_many_arguments)]
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * h, a + (i + 1) as f64 * h);
            let (fa, fm, fb) = (f(lo), f((lo + hi) / 2.0), f(hi));
            let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
            simpson(f, lo, hi, fa, fm, fb, whole, tol / pieces as f64, 40)
        })
        .sum()
}

/// Upper tail of the chi-square distribution by numerical integration of
/// its density, after substituting x = u^2 to remove the singularity at 0.
pub fn chi2_sf_integrated(q: f64, df: u32) -> f64 {
    if q <= 0.0 {
        return 1.0;
    }
    let k = df as f64;
    let log_norm = (2.0f64).ln() - (k / 2.0) * (2.0f64).ln() - gamma_half(df).ln();
    let density = move |u: f64| {
        if u <= 0.0 {
            return if df == 1 { (log_norm).exp() } else { 0.0 };
        }
        ((k - 1.0) * u.ln() - u * u / 2.0 + log_norm).exp()
    };
    let lo = q.sqrt();
    let hi = lo.max(k.sqrt()) + 40.0;
    integrate(&density, lo, hi, 1e-13)
}

/// Benjamini-Hochberg worked by hand, with the expected adjusted values.
pub const BH_HAND_CASES: &[(&[f64], &[f64])] = &[
    (&[0.03], &[0.03]),
    (&[0.01, 0.02, 0.03], &[0.03, 0.03, 0.03]),
    (&[0.5, 0.5], &[0.5, 0.5]),
    // sorted 0.01, 0.04, 0.9 -> 0.03, 0.06, 0.9
    (&[0.04, 0.01, 0.9], &[0.06, 0.03, 0.9]),
    // m=4, sorted 1/16, 1/8, 1/4, 1/2 -> 1/4, 1/4, 1/3, 1/2; step-up keeps them
    (&[0.0625, 0.5, 0.125, 0.25], &[0.25, 0.5, 0.25, 1.0 / 3.0]),
    // 0.125*4/1 = 0.5 but 0.25*4/4 = 0.25 propagates down
    (&[0.25, 0.125, 0.25, 0.25], &[0.25, 0.25, 0.25, 0.25]),
    // capped at 1
    (&[0.75, 0.75, 0.75], &[0.75, 0.75, 0.75]),
    (&[0.5, 0.75], &[0.75, 0.75]),
    (&[1.0, 0.0], &[1.0, 0.0]),
];

/// Benjamini-Hochberg by its defining double loop.
pub fn bh_direct(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut sorted = p.to_vec();
    sorted.sort_by(f64::total_cmp);
    p.iter()
        .map(|&pi| {
            // rank of pi among sorted values: last position holding it
            let i = sorted.iter().rposition(|&s| s == pi).unwrap() + 1;
            let mut best = 1.0f64;
            for j in i..=m {
                best = best.min((sorted[j - 1] * (m as f64 / j as f64)).min(1.0));
            }
            best
        })
        .collect()
}

/// Style inconsistency straight from its definition, over `(a, b)` pairs
/// laid out as `[a0, b0, a1, b1, ...]`.
pub fn si_direct(values: &[u64]) -> f64 {
    let mut minority = 0.0;
    let mut total = 0.0;
    for pair in values.chunks(2) {
        minority += pair[0].min(pair[1]) as f64;
        total += (pair[0] + pair[1]) as f64;
    }
    if total == 0.0 {
        0.0
    } else {
        100.0 * minority / total
    }
}
