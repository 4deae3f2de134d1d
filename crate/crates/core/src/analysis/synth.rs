//! Seeded synthetic timeline corpora with known answers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::metrics::Metric;

use super::MetricTimeline;

const BURN_IN: usize = 100;

/// AR(1) series `x_t = phi x_{t-1} + e_t` with standard normal noise.
pub fn ar1(rng: &mut impl Rng, phi: f64, n: usize) -> Vec<f64> {
    let mut x = 0.0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n + BURN_IN {
        let e: f64 = StandardNormal.sample(rng);
        x = phi * x + e;
        if i >= BURN_IN {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rq1Corpus {
    pub seed: u64,
    pub n_autocorrelated: usize,
    pub n_noise: usize,
    pub length: usize,
    pub phi: f64,
}

impl Default for Rq1Corpus {
    fn default() -> Self {
        Rq1Corpus { seed: 1, n_autocorrelated: 40, n_noise: 60, length: 200, phi: 0.9 }
    }
}

/// Files whose every metric is an independent AR(1) series (the first
/// `n_autocorrelated`) or white noise (the rest).
pub fn rq1_corpus(c: &Rq1Corpus) -> Vec<MetricTimeline> {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    (0..c.n_autocorrelated + c.n_noise)
        .map(|i| {
            let phi = if i < c.n_autocorrelated { c.phi } else { 0.0 };
            let kind = if i < c.n_autocorrelated { "ar" } else { "noise" };
            let columns: Vec<Vec<f64>> = Metric::ALL.iter().map(|_| ar1(&mut rng, phi, c.length)).collect();
            MetricTimeline {
                repo: "synthetic".into(),
                path: format!("{kind}_{i:03}.c"),
                committers: (0..c.length).map(|k| format!("dev{}@example.org", k % 7)).collect(),
                values: (0..c.length).map(|k| std::array::from_fn(|m| columns[m][k])).collect(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rq2Project {
    pub seed: u64,
    pub files: usize,
    pub planted_developers: usize,
    pub null_developers: usize,
    /// Commits each developer makes to top, to bottom and to middle files.
    pub commits_per_group: usize,
    pub group_metric: Metric,
    pub test_metric: Metric,
    /// Mean delta of the test metric that planted developers commit to top files.
    pub shift: f64,
}

impl Default for Rq2Project {
    fn default() -> Self {
        Rq2Project {
            seed: 7,
            files: 192,
            planted_developers: 10,
            null_developers: 10,
            commits_per_group: 30,
            group_metric: Metric::Si,
            test_metric: Metric::Cd,
            shift: 5.0,
        }
    }
}

/// One project whose metric values are random walks. Every step is standard
/// normal, except that planted developers' steps of the test metric in files
/// from the top quartile of the grouping metric have mean `shift`.
pub fn rq2_project(p: &Rq2Project) -> Vec<MetricTimeline> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n = p.files;
    // Distinct first values of the grouping metric: file i ranks i.
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let quarter = n / 4;
    let bottom: Vec<usize> = order[..quarter].to_vec();
    let top: Vec<usize> = order[n - quarter..].to_vec();
    let middle: Vec<usize> = order[quarter..n - quarter].to_vec();

    // First values of the other metrics: each of their quartiles holds the
    // same number of files from every quartile of the grouping metric, so
    // their top and bottom files see planted developers equally often.
    let rank: Vec<usize> = {
        let mut r = vec![0; n];
        for (pos, &f) in order.iter().enumerate() {
            r[f] = pos;
        }
        r
    };
    let mut first: Vec<[f64; Metric::COUNT]> = vec![[0.0; Metric::COUNT]; n];
    for m in Metric::ALL {
        if m == p.group_metric {
            for f in 0..n {
                first[f][m.index()] = rank[f] as f64;
            }
            continue;
        }
        for block in order.chunks(quarter.max(1)) {
            let mut block = block.to_vec();
            block.shuffle(&mut rng);
            for (k, &f) in block.iter().enumerate() {
                let q = (k % 4) as f64;
                first[f][m.index()] = 25.0 * q + rng.random_range(0.0..25.0);
            }
        }
    }
    let mut values: Vec<Vec<[f64; Metric::COUNT]>> = first.into_iter().map(|v| vec![v]).collect();
    let mut committers: Vec<Vec<String>> = (0..n).map(|_| vec!["founder@example.org".to_owned()]).collect();

    let devs = p.planted_developers + p.null_developers;
    let mut events: Vec<(usize, usize)> = Vec::new();
    for d in 0..devs {
        for set in [&top, &bottom, &middle] {
            for _ in 0..p.commits_per_group {
                events.push((d, set[rng.random_range(0..set.len())]));
            }
        }
    }
    events.shuffle(&mut rng);

    let shifted = Normal::new(p.shift, 1.0).expect("finite shift");
    let is_top: Vec<bool> = (0..n).map(|f| top.contains(&f)).collect();
    for (d, f) in events {
        let planted = d < p.planted_developers;
        let prev = *values[f].last().unwrap();
        let next: [f64; Metric::COUNT] = std::array::from_fn(|m| {
            let step: f64 = if planted && is_top[f] && m == p.test_metric.index() {
                shifted.sample(&mut rng)
            } else {
                StandardNormal.sample(&mut rng)
            };
            prev[m] + step
        });
        values[f].push(next);
        let name = if planted { format!("Planted{d}@Example.org") } else { format!("null{d}@example.org") };
        committers[f].push(name);
    }

    (0..n)
        .map(|f| MetricTimeline {
            repo: "planted".into(),
            path: format!("src/file_{f:03}.c"),
            committers: std::mem::take(&mut committers[f]),
            values: std::mem::take(&mut values[f]),
        })
        .collect()
}
