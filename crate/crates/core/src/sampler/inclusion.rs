/// Length of a half-year interval: 365.25 / 2 days.
pub const HALF_YEAR_SECS: i64 = 15_778_800;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RepoDescriptor {
    pub stars: Option<u64>,
    pub forks: Option<u64>,
    pub language: Option<String>,
    /// Commits per half-year interval, most recent interval first.
    pub half_year_commits: Option<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    /// Not enough evidence to decide.
    Indeterminate(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        *self == Verdict::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InclusionReport {
    pub popularity: Verdict,
    pub language: Verdict,
    pub continuity: Verdict,
}

impl InclusionReport {
    pub fn overall(&self) -> Verdict {
        let all = [&self.popularity, &self.language, &self.continuity];
        if let Some(fail) = all.iter().find(|v| matches!(v, Verdict::Fail(_))) {
            return (*fail).clone();
        }
        if let Some(unknown) = all.iter().find(|v| matches!(v, Verdict::Indeterminate(_))) {
            return (*unknown).clone();
        }
        Verdict::Pass
    }
}

/// Commits per half-year interval counted back from `anchor`; interval `k`
/// covers `(anchor - (k+1) H, anchor - k H]`. Later commits are ignored.
pub fn half_year_counts(timestamps: &[i64], anchor: i64, intervals: usize) -> Vec<u64> {
    let mut counts = vec![0u64; intervals];
    for &t in timestamps {
        if t > anchor {
            continue;
        }
        let k = ((anchor - t) / HALF_YEAR_SECS) as usize;
        if k < intervals {
            counts[k] += 1;
        }
    }
    counts
}

/// Popularity (more than `min_engagement` stars or forks), language, and
/// activity in each of the last `intervals` half-years.
pub fn check_inclusion(
    repo: &RepoDescriptor,
    languages: &[&str],
    min_engagement: u64,
    intervals: usize,
) -> InclusionReport {
    let popularity = match (repo.stars, repo.forks) {
        (Some(s), _) if s > min_engagement => Verdict::Pass,
        (_, Some(f)) if f > min_engagement => Verdict::Pass,
        (Some(s), Some(f)) => Verdict::Fail(format!("{s} stars and {f} forks, need more than {min_engagement}")),
        _ => Verdict::Indeterminate("star or fork count unknown".into()),
    };
    let language = match &repo.language {
        Some(l) if languages.iter().any(|x| x.eq_ignore_ascii_case(l)) => Verdict::Pass,
        Some(l) => Verdict::Fail(format!("language {l} not studied")),
        None => Verdict::Indeterminate("language unknown".into()),
    };
    let continuity = match &repo.half_year_commits {
        None => Verdict::Indeterminate("commit history unknown".into()),
        Some(c) => match c.iter().take(intervals).position(|&n| n == 0) {
            Some(k) => Verdict::Fail(format!("no commits in half-year interval {} back", k + 1)),
            None if c.len() < intervals => {
                Verdict::Indeterminate(format!("only {} of {intervals} half-year intervals known", c.len()))
            }
            None => Verdict::Pass,
        },
    };
    InclusionReport { popularity, language, continuity }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repo(stars: u64, forks: u64, lang: &str, halves: Vec<u64>) -> RepoDescriptor {
        RepoDescriptor {
            stars: Some(stars),
            forks: Some(forks),
            language: Some(lang.into()),
            half_year_commits: Some(halves),
        }
    }

    #[test]
    fn examples() {
        let ok = check_inclusion(&repo(26, 3, "C", vec![4; 20]), &["C", "Java"], 10, 20);
        assert_eq!(ok.overall(), Verdict::Pass);
        let r = check_inclusion(&repo(5, 5, "C", vec![4; 20]), &["C"], 10, 20);
        assert!(matches!(r.popularity, Verdict::Fail(_)));
        assert!(matches!(r.overall(), Verdict::Fail(_)));
        let mut halves = vec![4; 20];
        halves[7] = 0;
        let r = check_inclusion(&repo(500, 50, "C", halves), &["C"], 10, 20);
        assert!(matches!(r.continuity, Verdict::Fail(_)));
        assert!(check_inclusion(&repo(500, 5, "Rust", vec![1; 20]), &["C"], 10, 20).language != Verdict::Pass);
    }

    #[test]
    fn missing_fields_are_indeterminate() {
        let r = check_inclusion(&RepoDescriptor::default(), &["C"], 10, 20);
        assert!(matches!(r.popularity, Verdict::Indeterminate(_)));
        assert!(matches!(r.language, Verdict::Indeterminate(_)));
        assert!(matches!(r.continuity, Verdict::Indeterminate(_)));
        assert!(matches!(r.overall(), Verdict::Indeterminate(_)));
        let partial = RepoDescriptor { stars: Some(3), ..RepoDescriptor::default() };
        assert!(matches!(check_inclusion(&partial, &["C"], 10, 20).popularity, Verdict::Indeterminate(_)));
    }

    #[test]
    fn half_years_anchor_at_query_time() {
        let anchor = 1_700_000_000;
        let t = [anchor, anchor - 1, anchor - HALF_YEAR_SECS, anchor - HALF_YEAR_SECS - 1, anchor + 5, anchor - 40 * HALF_YEAR_SECS];
        assert_eq!(half_year_counts(&t, anchor, 3), vec![2, 2, 0]);
    }
}
