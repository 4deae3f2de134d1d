//! Mining per-file metric timelines from git history.

mod cache;
mod git;
pub mod tsv;

use std::collections::BTreeMap;
use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

pub use cache::{BlobCache, CachedMeasurement};
pub use git::{BlobReader, Change, Git, Revision};

use crate::metrics::{measure, SourceMetrics};
use crate::style::StyleCounts;

#[derive(Debug, thiserror::Error)]
pub enum HistoryError {
    #[error("not a git repository: {0}")]
    NotARepository(PathBuf),
    #[error("cannot run git: {0}")]
    Spawn(#[source] std::io::Error),
    #[error("git {command} failed: {stderr}")]
    Git { command: String, stderr: String },
    #[error("unexpected git output: {0}")]
    Parse(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RevisionRecord {
    pub repo: String,
    pub path: String,
    pub commit: String,
    pub committer: String,
    pub timestamp: i64,
    pub metrics: SourceMetrics,
    pub style: StyleCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Timeline {
    pub repo: String,
    pub path: String,
    pub records: Vec<RevisionRecord>,
}

#[derive(Debug, Clone)]
pub struct MineOptions {
    /// File name suffixes to mine, e.g. `.c`.
    pub extensions: Vec<String>,
    pub jobs: usize,
    /// Where the blob cache lives; `None` keeps it in memory only.
    pub cache_dir: Option<PathBuf>,
    /// Repository name used in records; defaults to the directory name.
    pub name: Option<String>,
}

impl Default for MineOptions {
    fn default() -> Self {
        MineOptions { extensions: vec![".c".into()], jobs: 1, cache_dir: None, name: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub path: String,
    pub commit: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct MineReport {
    pub repo: String,
    pub head: Option<String>,
    pub files: usize,
    pub records: usize,
    pub skipped: Vec<Skipped>,
    pub cache_hits: u64,
    pub computed: u64,
    /// Source lines over all records, cached or not.
    pub lines: u64,
    pub elapsed: Duration,
}

impl MineReport {
    pub fn lines_per_second(&self) -> f64 {
        self.lines as f64 / self.elapsed.as_secs_f64().max(1e-9)
    }
}

#[derive(Debug, Clone)]
pub struct Mined {
    pub timelines: Vec<Timeline>,
    pub report: MineReport,
}

/// Revisions of `file_path` on the first-parent history of HEAD, oldest first.
pub fn list_revisions(repo_path: &Path, file_path: &str) -> Result<Vec<Revision>, HistoryError> {
    Git::open(repo_path)?.list_revisions(file_path)
}

pub fn repo_name(repo_path: &Path) -> String {
    let canonical = repo_path.canonicalize().unwrap_or_else(|_| repo_path.to_path_buf());
    let base = canonical.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "repo".into());
    base.strip_suffix(".git").map(str::to_owned).unwrap_or(base)
}

/// Git's heuristic: a NUL byte early in the content marks it as binary.
fn is_binary(content: &[u8]) -> bool {
    content[..content.len().min(8000)].contains(&0)
}

/// Index of a file job with its records and skipped revisions.
type MinedFile = (usize, Vec<RevisionRecord>, Vec<Skipped>);

struct FileJob {
    path: String,
    revisions: Vec<(usize, Option<String>)>,
}

struct Counters {
    hits: AtomicU64,
    computed: AtomicU64,
}

fn mine_file(
    job: &FileJob,
    commits: &[Revision],
    repo: &str,
    cache: &BlobCache,
    reader: &mut Option<BlobReader>,
    git: &Git,
    counters: &Counters,
) -> Result<(Vec<RevisionRecord>, Vec<Skipped>), HistoryError> {
    let mut records = Vec::with_capacity(job.revisions.len());
    let mut skipped = Vec::new();
    for (idx, blob) in &job.revisions {
        let rev = &commits[*idx];
        let skip = |reason: &str| Skipped { path: job.path.clone(), commit: rev.commit.clone(), reason: reason.into() };
        let Some(blob) = blob else {
            skipped.push(skip("deleted"));
            continue;
        };
        let m = match cache.get(blob) {
            Some(m) => {
                counters.hits.fetch_add(1, Ordering::Relaxed);
                m
            }
            None => {
                if reader.is_none() {
                    *reader = Some(git.blob_reader()?);
                }
                let Some(content) = reader.as_mut().unwrap().read(blob)? else {
                    skipped.push(skip("missing object"));
                    continue;
                };
                if is_binary(&content) {
                    skipped.push(skip("binary content"));
                    continue;
                }
                let measured = measure(&content);
                let m = CachedMeasurement { metrics: measured.metrics, style: measured.style };
                counters.computed.fetch_add(1, Ordering::Relaxed);
                cache.insert(blob, m)?;
                m
            }
        };
        records.push(RevisionRecord {
            repo: repo.to_owned(),
            path: job.path.clone(),
            commit: rev.commit.clone(),
            committer: rev.committer.clone(),
            timestamp: rev.timestamp,
            metrics: m.metrics,
            style: m.style,
        });
    }
    Ok((records, skipped))
}

/// Mines every matching file of the repository's first-parent history.
/// The result does not depend on the worker count or on the cache state.
pub fn mine_repository(repo_path: &Path, options: &MineOptions) -> Result<Mined, HistoryError> {
    let start = Instant::now();
    let git = Git::open(repo_path)?;
    let repo = options.name.clone().unwrap_or_else(|| repo_name(repo_path));
    let cache = match &options.cache_dir {
        Some(dir) => BlobCache::open(dir)?,
        None => BlobCache::in_memory(),
    };
    let head = git.head()?;
    let changes = git.first_parent_changes()?;

    let mut by_path: BTreeMap<String, Vec<(usize, Option<String>)>> = BTreeMap::new();
    let mut commits = Vec::with_capacity(changes.len());
    for (idx, (rev, files)) in changes.into_iter().enumerate() {
        for change in files {
            if options.extensions.iter().any(|e| change.path.ends_with(e.as_str())) {
                by_path.entry(change.path).or_default().push((idx, change.blob));
            }
        }
        commits.push(rev);
    }
    let jobs: Vec<FileJob> = by_path.into_iter().map(|(path, revisions)| FileJob { path, revisions }).collect();

    let counters = Counters { hits: AtomicU64::new(0), computed: AtomicU64::new(0) };
    let next = AtomicUsize::new(0);
    let failed = AtomicBool::new(false);
    let workers = options.jobs.max(1).min(jobs.len().max(1));
    let results: Vec<Result<Vec<MinedFile>, HistoryError>> =
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    s.spawn(|| {
                        let mut reader = None;
                        let mut out = Vec::new();
                        loop {
                            if failed.load(Ordering::Relaxed) {
                                break;
                            }
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            let Some(job) = jobs.get(i) else { break };
                            match mine_file(job, &commits, &repo, &cache, &mut reader, &git, &counters) {
                                Ok((records, skipped)) => out.push((i, records, skipped)),
                                Err(e) => {
                                    failed.store(true, Ordering::Relaxed);
                                    return Err(e);
                                }
                            }
                        }
                        Ok(out)
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("mining worker panicked")).collect()
        });
    cache.flush()?;

    let mut per_file: Vec<Option<(Vec<RevisionRecord>, Vec<Skipped>)>> = (0..jobs.len()).map(|_| None).collect();
    for result in results {
        for (i, records, skipped) in result? {
            per_file[i] = Some((records, skipped));
        }
    }
    let mut timelines = Vec::new();
    let mut skipped_all = Vec::new();
    for (job, entry) in jobs.iter().zip(per_file) {
        let (records, skipped) = entry.expect("every file mined");
        for s in &skipped {
            if s.reason != "deleted" {
                log::warn!("skipped {}@{}: {}", s.path, &s.commit[..12], s.reason);
            }
        }
        skipped_all.extend(skipped);
        if !records.is_empty() {
            timelines.push(Timeline { repo: repo.clone(), path: job.path.clone(), records });
        }
    }

    let records = timelines.iter().map(|t| t.records.len()).sum();
    let lines = timelines.iter().flat_map(|t| &t.records).map(|r| r.metrics.n_lines).sum();
    let report = MineReport {
        repo,
        head,
        files: timelines.len(),
        records,
        skipped: skipped_all,
        cache_hits: counters.hits.into_inner(),
        computed: counters.computed.into_inner(),
        lines,
        elapsed: start.elapsed(),
    };
    log::info!(
        "{}: {} files, {} revisions, {} lines in {:.2}s ({:.0} lines/s, {} cached)",
        report.repo,
        report.files,
        report.records,
        report.lines,
        report.elapsed.as_secs_f64(),
        report.lines_per_second(),
        report.cache_hits
    );
    Ok(Mined { timelines, report })
}

/// Paths of the files written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub timeline: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `<repo>.timeline.tsv` and `<repo>.manifest.txt` into `out_dir`.
/// Both files are functions of the repository contents and options only.
pub fn write_outputs(mined: &Mined, options: &MineOptions, out_dir: &Path) -> Result<OutputPaths, HistoryError> {
    fs::create_dir_all(out_dir)?;
    let r = &mined.report;
    let timeline = out_dir.join(format!("{}.timeline.tsv", r.repo));
    let manifest = out_dir.join(format!("{}.manifest.txt", r.repo));
    let mut w = BufWriter::new(fs::File::create(&timeline)?);
    tsv::write_timelines(&mut w, &mined.timelines)?;
    std::io::Write::flush(&mut w)?;

    let skipped_other = r.skipped.iter().filter(|s| s.reason != "deleted").count();
    let text = format!(
        "tool = cqual {}\nrepo = {}\nhead = {}\nextensions = {}\nhistory = first-parent\nfiles = {}\nrevisions = {}\nlines = {}\ndeleted_revisions = {}\nskipped_revisions = {}\n",
        env!("CARGO_PKG_VERSION"),
        r.repo,
        r.head.as_deref().unwrap_or("none"),
        options.extensions.join(","),
        r.files,
        r.records,
        r.lines,
        r.skipped.len() - skipped_other,
        skipped_other,
    );
    fs::write(&manifest, text)?;
    Ok(OutputPaths { timeline, manifest })
}
