//! Command-line front end. `run` parses arguments, merges the optional
//! `--config` file, dispatches, and maps failures to exit codes:
//! 0 success, 1 runtime failure, 2 usage or configuration error.

use std::collections::HashSet;
use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use crate::analysis::{self, AnalysisError, BhScope, Format, Rq1Params, Rq2Params};
use crate::history::{self, Git, HistoryError, MineOptions};
use crate::metrics::{measure, METRIC_COLUMNS};
use crate::sampler::{
    self, check_inclusion, half_year_counts, CatalogClient, CatalogQuery, Engagement, RepoDescriptor, SamplerError,
    UreqTransport, Verdict, TOKEN_VARIABLE,
};
use crate::style::StyleCounts;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    History(#[from] HistoryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    /// Stable, machine-readable failure class printed as `error[<category>]`.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::History(e) => match e {
                HistoryError::NotARepository(_) => "input",
                HistoryError::Cache(_) => "cache",
                HistoryError::Io(_) => "io",
                _ => "git",
            },
            CliError::Analysis(e) => match e {
                AnalysisError::NoInput(_) | AnalysisError::Parse { .. } => "input",
                AnalysisError::Invalid(_) => "usage",
                AnalysisError::Io(_) => "io",
            },
            CliError::Sampler(e) => match e {
                SamplerError::Invalid(_) => "usage",
                SamplerError::Auth(_) => "auth",
                SamplerError::RateLimited { .. } => "rate-limit",
                SamplerError::NotCached(_) => "offline",
                SamplerError::Io(_) => "io",
                _ => "network",
            },
            CliError::Io { .. } => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "usage" | "config" => 2,
            _ => 1,
        }
    }
}

fn io_err(context: impl std::fmt::Display) -> impl FnOnce(std::io::Error) -> CliError {
    let context = context.to_string();
    move |source| CliError::Io { context, source }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "cqual", version, about = "Compilation-free C code quality metrics across git history")]
struct Cli {
    /// File of `key = value` lines setting defaults for any long flag;
    /// flags given on the command line take precedence
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Log more to standard error (-v info, -vv debug); RUST_LOG overrides
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Measure one C source from standard input (or FILE) and print one TSV record
    Measure(MeasureArgs),
    /// Mine per-file metric timelines from a repository's first-parent history
    Mine(MineArgs),
    /// Autocorrelation analysis: share of files with significant ACF per metric and lag
    Rq1(Rq1Args),
    /// Developer analysis: commit deltas in top versus bottom quartile files
    Rq2(Rq2Args),
    /// Stratified sampling plan from per-stratum project counts
    Plan(PlanArgs),
    /// Check a candidate repository against the inclusion criteria
    Include(IncludeArgs),
    /// Mine every repository in a list, then run both analyses
    Replicate(ReplicateArgs),
    /// Write a seeded synthetic timeline corpus
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Source file; standard input when absent
    file: Option<PathBuf>,
    /// Print the column names first
    #[arg(long)]
    header: bool,
}

#[derive(Args, Debug, Clone)]
struct MiningFlags {
    /// File name suffixes to mine
    #[arg(long, value_delimiter = ',', default_value = ".c")]
    ext: Vec<String>,
    /// Worker threads
    #[arg(short, long, default_value_t = default_jobs(), value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
}

#[derive(Args, Debug)]
struct MineArgs {
    /// Repository working tree or bare repository
    #[arg(long)]
    repo: PathBuf,
    /// Output directory for `<repo>.timeline.tsv` and `<repo>.manifest.txt`
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    mining: MiningFlags,
    /// Blob measurement cache; reruns only measure new content
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Repository name in the outputs (default: directory name)
    #[arg(long)]
    name: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Csv,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BhScopeArg {
    Cell,
    Global,
}

#[derive(Args, Debug, Clone)]
struct Rq1Flags {
    /// Largest lag tested
    #[arg(long, default_value_t = 50)]
    max_lag: usize,
    /// Autocorrelation a file must exceed to count
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Significance level of the tests
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Files need more than this many revisions
    #[arg(long, default_value_t = 50)]
    min_commits: usize,
}

#[derive(Args, Debug, Clone)]
struct Rq2Flags {
    /// Lower and upper quantile of the first-revision value
    #[arg(long, value_delimiter = ',', num_args = 1.., default_values_t = [0.25, 0.75])]
    quantiles: Vec<f64>,
    /// Minimum deltas per developer in each group
    #[arg(long, default_value_t = 10)]
    min_dev_commits: usize,
    /// Benjamini-Hochberg family: per heatmap cell or the whole grid
    #[arg(long, value_enum, default_value = "cell")]
    bh_scope: BhScopeArg,
}

#[derive(Args, Debug)]
struct Rq1Args {
    /// Glob of timeline TSV files
    #[arg(long)]
    timelines: String,
    /// Output directory for `rq1_acf.*`
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    params: Rq1Flags,
    /// Output formats
    /// Output formats
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    format: Vec<FormatArg>,
    /// Worker threads
    #[arg(short, long, default_value_t = default_jobs(), value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
}

#[derive(Args, Debug)]
struct Rq2Args {
    /// Glob of timeline TSV files
    #[arg(long)]
    timelines: String,
    /// Output directory for `rq2_heatmap.*`
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    params: Rq2Flags,
    /// Significance level of the adjusted tests
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Output formats
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    format: Vec<FormatArg>,
    /// Worker threads
    #[arg(short, long, default_value_t = default_jobs(), value_parser = clap::value_parser!(u32).range(1..))]
    jobs: u32,
}

#[derive(Args, Debug)]
struct PlanArgs {
    /// Language qualifier of the catalog query
    #[arg(long, default_value = "c")]
    language: String,
    /// Engagement measure defining the strata
    #[arg(long, default_value = "stars")]
    engagement: Engagement,
    /// Target number of projects
    #[arg(long)]
    n: u64,
    /// Strata to query; stratum i covers 10^i+1 ..= 10^(i+1)
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3, 4, 5])]
    strata: Vec<u32>,
    /// Project counts of strata 1, 2, ... given directly instead of queried
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<u64>>,
    /// Catalog response cache
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Answer from the cache only
    #[arg(long)]
    offline: bool,
    /// Only count repositories created before this date (YYYY-MM-DD)
    #[arg(long)]
    created_before: Option<String>,
    /// Retries after a rate-limit response
    #[arg(long, default_value_t = 5)]
    max_retries: u32,
}

#[derive(Args, Debug)]
struct IncludeArgs {
    /// Repository whose commit history is checked
    #[arg(long)]
    repo: PathBuf,
    /// Star count, if known
    #[arg(long)]
    stars: Option<u64>,
    /// Fork count, if known
    #[arg(long)]
    forks: Option<u64>,
    /// Primary language of the repository
    #[arg(long)]
    language: Option<String>,
    /// Accepted languages
    #[arg(long, value_delimiter = ',', default_values_t = ["c".to_string(), "java".to_string()])]
    languages: Vec<String>,
    /// Stars or forks must exceed this
    #[arg(long, default_value_t = 10)]
    min_engagement: u64,
    /// Half-year intervals that must each contain a commit
    #[arg(long, default_value_t = 20)]
    intervals: usize,
    /// End of the most recent interval, Unix seconds (default: now)
    #[arg(long)]
    anchor: Option<i64>,
}

#[derive(Args, Debug)]
struct ReplicateArgs {
    /// File listing one repository path per line; `#` starts a comment
    #[arg(long)]
    repos: PathBuf,
    /// Output directory: `timelines/`, `cache/` and the analysis results
    #[arg(short, long)]
    out: PathBuf,
    #[command(flatten)]
    mining: MiningFlags,
    /// Blob measurement cache (default: <out>/cache)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[command(flatten)]
    rq1: Rq1Flags,
    #[command(flatten)]
    rq2: Rq2Flags,
    /// Output formats
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    format: Vec<FormatArg>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SynthKind {
    /// Autoregressive and white-noise files
    Rq1,
    /// One project with planted developer behaviour
    Rq2,
}

#[derive(Args, Debug)]
struct SynthArgs {
    /// Which corpus to generate
    kind: SynthKind,
    /// Random seed (default: the corpus's fixed seed)
    #[arg(long)]
    seed: Option<u64>,
    /// Output timeline TSV
    #[arg(short, long)]
    out: PathBuf,
}

fn default_jobs() -> u32 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u32)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(args) {
        Ok(cli) => cli,
        Err(Parsed::Clap(e)) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                let _ = e.print();
                return 2;
            }
            let text = e.render().to_string();
            eprintln!("error[usage]: {}", text.trim_start_matches("error: ").trim_end());
            return 2;
        }
        Err(Parsed::Cli(e)) => {
            eprintln!("error[{}]: {e}", e.category());
            return e.exit_code();
        }
    };
    init_logging(cli.verbose);
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.category());
            e.exit_code()
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .format_timestamp(None)
        .try_init();
}

enum Parsed {
    Clap(clap::Error),
    Cli(CliError),
}

fn parse(args: Vec<OsString>) -> std::result::Result<Cli, Parsed> {
    let command = Cli::command();
    let args = match config_path(&args) {
        Some(path) => merge_config(&command, args, &path).map_err(Parsed::Cli)?,
        None => args,
    };
    let matches = command.try_get_matches_from(args).map_err(Parsed::Clap)?;
    Cli::from_arg_matches(&matches).map_err(Parsed::Clap)
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let a = a.to_string_lossy();
        if a == "--" {
            break;
        }
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(v));
        }
    }
    None
}

/// Inserts config-file settings as flags right after the subcommand name,
/// skipping any flag that the command line already sets.
fn merge_config(command: &clap::Command, mut args: Vec<OsString>, path: &Path) -> Result<Vec<OsString>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let entries = parse_config(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;

    let names: HashSet<&str> = command.get_subcommands().map(|s| s.get_name()).collect();
    let Some(at) = args.iter().position(|a| names.contains(a.to_string_lossy().as_ref())) else {
        return Ok(args);
    };
    let sub = command.find_subcommand(args[at].to_string_lossy().as_ref()).expect("known subcommand");
    let given: Vec<String> = args[at + 1..].iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let known: HashSet<&str> = command
        .get_subcommands()
        .flat_map(|s| s.get_arguments())
        .filter_map(|a| a.get_long())
        .collect();

    let mut extra = Vec::new();
    for (line, key, value) in entries {
        if key == "config" || !known.contains(key.as_str()) {
            return Err(CliError::Config(format!("{}:{line}: unknown key `{key}`", path.display())));
        }
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            log::debug!("config key `{key}` does not apply to `{}`", sub.get_name());
            continue;
        };
        let short = arg.get_short().map(|c| format!("-{c}"));
        let overridden = given.iter().any(|g| {
            g == &format!("--{key}")
                || g.starts_with(&format!("--{key}="))
                || short.as_ref().is_some_and(|s| g.starts_with(s.as_str()))
        });
        if overridden {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(OsString::from(format!("--{key}={value}")));
        } else {
            match value.as_str() {
                "true" | "yes" | "1" => extra.push(OsString::from(format!("--{key}"))),
                "false" | "no" | "0" => {}
                _ => {
                    return Err(CliError::Config(format!(
                        "{}:{line}: `{key}` takes true or false, not `{value}`",
                        path.display()
                    )))
                }
            }
        }
    }
    args.splice(at + 1..at + 1, extra);
    Ok(args)
}

/// `key = value` lines; `#` starts a comment line. Keys may use `_` for `-`.
fn parse_config(text: &str) -> std::result::Result<Vec<(usize, String, String)>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected `key = value`", i + 1));
        };
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_owned();
        if key.is_empty() {
            return Err(format!("line {}: empty key", i + 1));
        }
        out.push((i + 1, key, value));
    }
    Ok(out)
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Measure(a) => cmd_measure(a),
        Command::Mine(a) => cmd_mine(a),
        Command::Rq1(a) => cmd_rq1(a),
        Command::Rq2(a) => cmd_rq2(a),
        Command::Plan(a) => cmd_plan(a),
        Command::Include(a) => cmd_include(a),
        Command::Replicate(a) => cmd_replicate(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn cmd_measure(a: MeasureArgs) -> Result<()> {
    let src = match &a.file {
        Some(p) => std::fs::read(p).map_err(io_err(p.display()))?,
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(io_err("standard input"))?;
            buf
        }
    };
    let m = measure(&src);
    let mut out = std::io::stdout().lock();
    let mut text = String::new();
    if a.header {
        let cols: Vec<String> =
            METRIC_COLUMNS.iter().map(|s| s.to_string()).chain(StyleCounts::column_names()).collect();
        text.push_str(&cols.join("\t"));
        text.push('\n');
    }
    let fields: Vec<String> = m
        .metrics
        .counts()
        .iter()
        .map(u64::to_string)
        .chain(m.metrics.ratios().iter().map(f64::to_string))
        .chain(m.style.values().map(|v| v.to_string()))
        .collect();
    text.push_str(&fields.join("\t"));
    text.push('\n');
    out.write_all(text.as_bytes()).map_err(io_err("standard output"))
}

fn mine_options(m: &MiningFlags, cache_dir: Option<PathBuf>, name: Option<String>) -> MineOptions {
    MineOptions { extensions: m.ext.clone(), jobs: m.jobs as usize, cache_dir, name }
}

fn cmd_mine(a: MineArgs) -> Result<()> {
    let options = mine_options(&a.mining, a.cache_dir, a.name);
    let mined = history::mine_repository(&a.repo, &options)?;
    let paths = history::write_outputs(&mined, &options, &a.out)?;
    log::info!("wrote {}", paths.timeline.display());
    Ok(())
}

fn pool(jobs: u32) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))
}

fn rq1_params(f: &Rq1Flags) -> Result<Rq1Params> {
    let p = Rq1Params { max_lag: f.max_lag, threshold: f.threshold, alpha: f.alpha, min_commits: f.min_commits };
    p.validate()?;
    Ok(p)
}

fn rq2_params(f: &Rq2Flags, alpha: f64) -> Result<Rq2Params> {
    let [q_low, q_high] = f.quantiles[..] else {
        return Err(CliError::Usage(format!("--quantiles takes two values, got {}", f.quantiles.len())));
    };
    let bh_scope = match f.bh_scope {
        BhScopeArg::Cell => BhScope::Cell,
        BhScopeArg::Global => BhScope::Global,
    };
    let p = Rq2Params { q_low, q_high, min_dev_commits: f.min_dev_commits, alpha, bh_scope };
    p.validate()?;
    Ok(p)
}

fn formats(f: &[FormatArg]) -> Vec<Format> {
    let mut out: Vec<Format> = Vec::new();
    for &x in f {
        let x = Format::from(x);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

fn cmd_rq1(a: Rq1Args) -> Result<()> {
    let params = rq1_params(&a.params)?;
    let timelines = analysis::load_timelines(&a.timelines)?;
    let rows = pool(a.jobs)?.install(|| analysis::rq1(&timelines, &params))?;
    for p in analysis::write_figures(&a.out, Some(&rows), None, &formats(&a.format))? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_rq2(a: Rq2Args) -> Result<()> {
    let params = rq2_params(&a.params, a.alpha)?;
    let timelines = analysis::load_timelines(&a.timelines)?;
    let cells = pool(a.jobs)?.install(|| analysis::rq2(&timelines, &params))?;
    for p in analysis::write_figures(&a.out, None, Some(&cells), &formats(&a.format))? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_plan(a: PlanArgs) -> Result<()> {
    let counts = match &a.counts {
        Some(c) => c.clone(),
        None => {
            let token = std::env::var(TOKEN_VARIABLE).ok().filter(|t| !t.is_empty());
            let mut client =
                CatalogClient::new(UreqTransport::default(), token, a.cache_dir.clone()).offline(a.offline);
            client.max_retries = a.max_retries;
            let query = CatalogQuery {
                language: a.language.clone(),
                engagement: a.engagement,
                strata: a.strata.clone(),
                created_before: a.created_before.clone(),
            };
            let counts = client.fetch_stratum_counts(&query)?;
            // Strata are planned by position, so fill any gaps below the highest one.
            let top = a.strata.iter().copied().max().unwrap_or(0) as usize;
            let mut full = vec![0; top];
            for (&i, &c) in a.strata.iter().zip(&counts) {
                if i == 0 {
                    return Err(CliError::Usage("strata start at 1".into()));
                }
                full[i as usize - 1] = c;
            }
            full
        }
    };
    let plans = sampler::plan_strata(&counts, a.n)?;
    let s = sampler::selection_probability(&plans, a.n);
    log::info!("selection probability per engagement {s:.6e}");
    let mut text = String::from("stratum\tlow\thigh\tprojects\ttotal_engagements\traw_select\tn_select\n");
    for p in &plans {
        let (lo, hi) = sampler::stratum_bounds(p.index);
        text.push_str(&format!(
            "{}\t{lo}\t{hi}\t{}\t{}\t{:.6}\t{}\n",
            p.index, p.projects, p.total_engagements, p.raw_select, p.n_select
        ));
    }
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_err("standard output"))
}

fn cmd_include(a: IncludeArgs) -> Result<()> {
    let git = Git::open(&a.repo)?;
    let anchor = match a.anchor {
        Some(t) => t,
        None => std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs() as i64),
    };
    let times = git.commit_times()?;
    let descriptor = RepoDescriptor {
        stars: a.stars,
        forks: a.forks,
        language: a.language.clone(),
        half_year_commits: Some(half_year_counts(&times, anchor, a.intervals)),
    };
    let languages: Vec<&str> = a.languages.iter().map(String::as_str).collect();
    let report = check_inclusion(&descriptor, &languages, a.min_engagement, a.intervals);
    let show = |v: &Verdict| match v {
        Verdict::Pass => "pass".to_owned(),
        Verdict::Fail(why) => format!("fail\t{why}"),
        Verdict::Indeterminate(why) => format!("indeterminate\t{why}"),
    };
    let text = format!(
        "popularity\t{}\nlanguage\t{}\ncontinuity\t{}\noverall\t{}\n",
        show(&report.popularity),
        show(&report.language),
        show(&report.continuity),
        show(&report.overall())
    );
    std::io::stdout().lock().write_all(text.as_bytes()).map_err(io_err("standard output"))
}

/// Repository paths from a list file, relative to the list's directory.
fn read_repo_list(path: &Path) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path).map_err(io_err(path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let repos: Vec<PathBuf> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect();
    if repos.is_empty() {
        return Err(CliError::Analysis(AnalysisError::NoInput(path.display().to_string())));
    }
    Ok(repos)
}

/// A manifest written for the same head and extensions means the timeline
/// next to it is complete and current.
fn checkpoint_is_current(manifest: &Path, head: Option<&str>, ext: &[String]) -> bool {
    let Ok(text) = std::fs::read_to_string(manifest) else { return false };
    let want_head = format!("head = {}", head.unwrap_or("none"));
    let want_ext = format!("extensions = {}", ext.join(","));
    let want_tool = format!("tool = cqual {}", env!("CARGO_PKG_VERSION"));
    let lines: HashSet<&str> = text.lines().collect();
    lines.contains(want_head.as_str()) && lines.contains(want_ext.as_str()) && lines.contains(want_tool.as_str())
}

fn cmd_replicate(a: ReplicateArgs) -> Result<()> {
    let rq1p = rq1_params(&a.rq1)?;
    let rq2p = rq2_params(&a.rq2, a.rq1.alpha)?;
    let repos = read_repo_list(&a.repos)?;
    let timelines_dir = a.out.join("timelines");
    let cache_dir = a.cache_dir.clone().unwrap_or_else(|| a.out.join("cache"));

    let mut seen = HashSet::new();
    let mut files = Vec::new();
    for repo in &repos {
        let name = history::repo_name(repo);
        if !seen.insert(name.clone()) {
            return Err(CliError::Usage(format!("two repositories are named `{name}`")));
        }
        let timeline = timelines_dir.join(format!("{name}.timeline.tsv"));
        let manifest = timelines_dir.join(format!("{name}.manifest.txt"));
        let head = Git::open(repo)?.head()?;
        if timeline.is_file() && checkpoint_is_current(&manifest, head.as_deref(), &a.mining.ext) {
            log::info!("{name}: up to date, not mined again");
        } else {
            if manifest.exists() {
                std::fs::remove_file(&manifest).map_err(io_err(manifest.display()))?;
            }
            let options = mine_options(&a.mining, Some(cache_dir.clone()), None);
            let mined = history::mine_repository(repo, &options)?;
            history::write_outputs(&mined, &options, &timelines_dir)?;
        }
        files.push(timeline);
    }

    let mut timelines = Vec::new();
    for f in &files {
        let file = std::fs::File::open(f).map_err(io_err(f.display()))?;
        timelines.extend(analysis::read_metric_timelines(std::io::BufReader::new(file), f)?);
    }
    let pool = pool(a.mining.jobs)?;
    let rows = pool.install(|| analysis::rq1(&timelines, &rq1p))?;
    let cells = pool.install(|| analysis::rq2(&timelines, &rq2p))?;
    for p in analysis::write_figures(&a.out, Some(&rows), Some(&cells), &formats(&a.format))? {
        log::info!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    let timelines = match a.kind {
        SynthKind::Rq1 => {
            let mut c = analysis::synth::Rq1Corpus::default();
            if let Some(s) = a.seed {
                c.seed = s;
            }
            analysis::synth::rq1_corpus(&c)
        }
        SynthKind::Rq2 => {
            let mut p = analysis::synth::Rq2Project::default();
            if let Some(s) = a.seed {
                p.seed = s;
            }
            analysis::synth::rq2_project(&p)
        }
    };
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir.display()))?;
    }
    let file = std::fs::File::create(&a.out).map_err(io_err(a.out.display()))?;
    let mut w = std::io::BufWriter::new(file);
    analysis::write_metric_timelines(&mut w, &timelines).map_err(io_err(a.out.display()))?;
    w.flush().map_err(io_err(a.out.display()))
}
