use super::SamplerError;

#[derive(Debug, Clone, PartialEq)]
pub struct StratumPlan {
    /// Stratum `i` covers engagements `10^i + 1 ..= 10^(i+1)`.
    pub index: u32,
    pub projects: u64,
    /// Estimated total engagements, `P (10^i + 10^(i+1)) / 2`.
    pub total_engagements: u128,
    /// Unrounded share of the target, `S T`.
    pub raw_select: f64,
    pub n_select: u64,
}

pub fn stratum_bounds(index: u32) -> (u64, u64) {
    (10u64.pow(index) + 1, 10u64.pow(index + 1))
}

fn total_engagements(index: u32, projects: u64) -> u128 {
    let lo = 10u128.pow(index);
    projects as u128 * (lo + 10 * lo) / 2
}

/// Selection probability `S = N / sum(T)` of a single engagement.
pub fn selection_probability(plans: &[StratumPlan], n_target: u64) -> f64 {
    let total: u128 = plans.iter().map(|p| p.total_engagements).sum();
    n_target as f64 / total as f64
}

/// Number of projects to draw from each stratum. `projects[k]` is the
/// project count of stratum `k + 1`. The shares `N T_i / sum(T)` are
/// rounded half to even, then adjusted by largest remainder (lower stratum
/// first on ties) so that they add up to `n_target` exactly.
pub fn plan_strata(projects: &[u64], n_target: u64) -> Result<Vec<StratumPlan>, SamplerError> {
    if n_target == 0 {
        return Err(SamplerError::Invalid("target sample size must be positive".into()));
    }
    if projects.len() > 18 {
        return Err(SamplerError::Invalid(format!("{} strata exceed the supported 18", projects.len())));
    }
    let totals: Vec<u128> = projects.iter().enumerate().map(|(k, &p)| total_engagements(k as u32 + 1, p)).collect();
    let sum: u128 = totals.iter().sum();
    if sum == 0 {
        return Err(SamplerError::Invalid("every stratum is empty".into()));
    }
    let n = n_target as u128;
    let mut counts: Vec<u128> = totals
        .iter()
        .map(|&t| {
            let (q, r) = (n * t / sum, n * t % sum);
            match (2 * r).cmp(&sum) {
                std::cmp::Ordering::Greater => q + 1,
                std::cmp::Ordering::Equal => q + (q & 1),
                std::cmp::Ordering::Less => q,
            }
        })
        .collect();
    // Signed remainder of each stratum, in units of 1/sum.
    let remainder = |k: usize, c: u128| n as i128 * totals[k] as i128 - (c * sum) as i128;
    let assigned: u128 = counts.iter().sum();
    if assigned < n {
        for _ in 0..(n - assigned) {
            let k = (0..counts.len())
                .max_by(|&a, &b| remainder(a, counts[a]).cmp(&remainder(b, counts[b])).then(b.cmp(&a)))
                .expect("at least one stratum");
            counts[k] += 1;
        }
    } else {
        for _ in 0..(assigned - n) {
            let k = (0..counts.len())
                .filter(|&k| counts[k] > 0)
                .min_by(|&a, &b| remainder(a, counts[a]).cmp(&remainder(b, counts[b])).then(a.cmp(&b)))
                .expect("a stratum to take from");
            counts[k] -= 1;
        }
    }
    Ok(projects
        .iter()
        .enumerate()
        .map(|(k, &p)| StratumPlan {
            index: k as u32 + 1,
            projects: p,
            total_engagements: totals[k],
            raw_select: n_target as f64 * totals[k] as f64 / sum as f64,
            n_select: counts[k] as u64,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let plan = plan_strata(&[0, 0, 0, 51, 0], 30).unwrap();
        assert_eq!(plan[3].total_engagements, 2_805_000);
        assert_eq!(plan[3].n_select, 30);
        assert_eq!(plan[0].total_engagements, 0);
        assert_eq!(plan[0].n_select, 0);

        let plan = plan_strata(&[10, 1], 5).unwrap();
        assert_eq!(plan.iter().map(|p| p.total_engagements).collect::<Vec<_>>(), [550, 550]);
        assert_eq!(plan.iter().map(|p| p.raw_select).collect::<Vec<_>>(), [2.5, 2.5]);
        assert_eq!(plan.iter().map(|p| p.n_select).collect::<Vec<_>>(), [3, 2]);
        assert!((selection_probability(&plan, 5) - 5.0 / 1100.0).abs() < 1e-18);
    }

    #[test]
    fn rounding_down_takes_from_the_smallest_remainder() {
        // shares 1.5, 1.5, 1.5, 0.5 -> half-even 2, 2, 2, 0 = 6 > 5
        let plan = plan_strata(&[30, 3, 0, 0], 3).unwrap();
        assert_eq!(plan.iter().map(|p| p.n_select).sum::<u64>(), 3);
        let plan = plan_strata(&[3, 0], 1).unwrap();
        assert_eq!(plan[0].n_select, 1);
    }

    #[test]
    fn errors() {
        assert!(plan_strata(&[0, 0, 0], 10).is_err());
        assert!(plan_strata(&[1], 0).is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(stratum_bounds(1), (11, 100));
        assert_eq!(stratum_bounds(5), (100_001, 1_000_000));
    }
}
