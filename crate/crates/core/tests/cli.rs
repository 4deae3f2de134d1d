mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use common::repo;

fn cqual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cqual")).args(args).env_remove("RUST_LOG").output().unwrap()
}

fn cqual_stdin(args: &[&str], input: &[u8]) -> Output {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_cqual"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn golden_source() -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/golden/02_main.c")).unwrap()
}

#[test]
fn measure_prints_one_record() {
    let src = golden_source();
    let o = cqual_stdin(&["measure"], &src);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    let fields: Vec<&str> = out.trim_end().split('\t').collect();
    assert_eq!(fields.len(), 21 + 40);

    let m = cqual::measure(&src);
    let expect: Vec<String> = m
        .metrics
        .counts()
        .iter()
        .map(u64::to_string)
        .chain(m.metrics.ratios().iter().map(f64::to_string))
        .chain(m.style.values().map(|v| v.to_string()))
        .collect();
    assert_eq!(fields, expect);

    let o = cqual_stdin(&["measure", "--header"], &src);
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("n_statements\t"));
    assert_eq!(lines[0].split('\t').count(), 61);
    assert_eq!(lines[1], out.lines().nth(1).unwrap());
}

#[test]
fn missing_timelines_are_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = cqual(&["rq1", "--timelines", s(&dir.path().join("none.tsv")), "--out", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[input]: no input timelines"), "{}", stderr(&o));
}

#[test]
fn bad_flags_are_usage_errors() {
    let o = cqual(&["rq1", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]"), "{}", stderr(&o));

    let o = cqual(&["rq1", "--timelines", "x", "--out", "y", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]"), "{}", stderr(&o));

    let o = cqual(&["rq2", "--timelines", "x", "--out", "y", "--quantiles", "0.8,0.2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cqual(&["mine", "--repo", ".", "--out", "y", "--jobs", "0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cqual(&[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_documents_every_flag() {
    for sub in ["measure", "mine", "rq1", "rq2", "plan", "include", "replicate", "synth"] {
        let o = cqual(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        // An undocumented option is followed directly by the next one.
        let lines: Vec<&str> = text.lines().collect();
        for (i, l) in lines.iter().enumerate() {
            let t = l.trim_start();
            if t.starts_with("--") || (t.starts_with('-') && t.chars().nth(1).is_some_and(|c| c.is_alphabetic())) {
                let inline = t.split_once("  ").is_some_and(|(_, d)| !d.trim().is_empty());
                let next = lines.get(i + 1).map(|n| n.trim_start()).unwrap_or("");
                let below = !next.is_empty() && !next.starts_with('-');
                assert!(inline || below, "{sub}: `{t}` has no description");
            }
        }
    }
}

#[test]
fn synthetic_corpus_through_rq1_and_rq2() {
    let dir = tempfile::tempdir().unwrap();
    let t1 = dir.path().join("synth/rq1.timeline.tsv");
    assert!(cqual(&["synth", "rq1", "--out", s(&t1)]).status.success());
    let out = dir.path().join("out");
    let o = cqual(&["rq1", "--timelines", s(&t1), "--out", s(&out), "--format", "csv,svg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("rq1_acf.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 11 * 50);
    for line in csv.lines().filter(|l| l.split(',').nth(1) == Some("1")) {
        let pct: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert!((35.0..=45.0).contains(&pct), "{line}");
    }
    assert!(out.join("rq1_acf.svg").is_file());

    let t2 = dir.path().join("synth/rq2.timeline.tsv");
    assert!(cqual(&["synth", "rq2", "--out", s(&t2)]).status.success());
    let o = cqual(&["rq2", "--timelines", s(&t2), "--out", s(&out), "--format", "svg,csv"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("rq2_heatmap.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 121);
    let planted = csv.lines().find(|l| l.starts_with("SI,CD,")).unwrap();
    let pct: f64 = planted.split(',').nth(2).unwrap().parse().unwrap();
    assert!((40.0..=60.0).contains(&pct), "{planted}");
}

fn fixture_repo(root: &Path, name: &str, seed: u64) -> PathBuf {
    let dir = root.join(name);
    repo::build(&dir, &repo::evolving_project(seed, 4, 5, 240));
    dir
}

#[test]
fn mine_writes_timeline_and_manifest() {
    let root = tempfile::tempdir().unwrap();
    let r = fixture_repo(root.path(), "alpha", 3);
    let out = root.path().join("out");
    let o = cqual(&["mine", "--repo", s(&r), "--out", s(&out), "--jobs", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let tsv = std::fs::read_to_string(out.join("alpha.timeline.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 1 + 240);
    assert_eq!(tsv.lines().next().unwrap().split('\t').count(), 66);
    let manifest = std::fs::read_to_string(out.join("alpha.manifest.txt")).unwrap();
    assert!(manifest.contains("files = 4\n"), "{manifest}");

    let o = cqual(&["mine", "--repo", s(&root.path().join("nowhere")), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[input]"), "{}", stderr(&o));
}

#[test]
fn replicate_chains_the_pipeline_deterministically() {
    let root = tempfile::tempdir().unwrap();
    fixture_repo(root.path(), "alpha", 1);
    fixture_repo(root.path(), "beta", 2);
    let list = root.path().join("repos.txt");
    std::fs::write(&list, "# fixtures\nalpha\n\nbeta\n").unwrap();
    let out = root.path().join("results");
    let o = cqual(&["replicate", "--repos", s(&list), "--out", s(&out), "--jobs", "2", "--min-dev-commits", "5"]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["timelines/alpha.timeline.tsv", "timelines/beta.timeline.tsv", "rq1_acf.csv", "rq2_heatmap.csv"] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let rq1 = std::fs::read_to_string(out.join("rq1_acf.csv")).unwrap();
    let rq2 = std::fs::read_to_string(out.join("rq2_heatmap.csv")).unwrap();
    assert_eq!(rq1.lines().count(), 1 + 550);
    assert_eq!(rq2.lines().count(), 1 + 121);
    // Files have about 60 revisions each, so some are analysed.
    assert!(rq1.lines().skip(1).any(|l| l.split(',').nth(4) != Some("0")), "{rq1}");

    let o = cqual(&["-v", "replicate", "--repos", s(&list), "--out", s(&out), "--min-dev-commits", "5"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("alpha: up to date"), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out.join("rq1_acf.csv")).unwrap(), rq1);
    assert_eq!(std::fs::read_to_string(out.join("rq2_heatmap.csv")).unwrap(), rq2);

    let fresh = root.path().join("again");
    let o = cqual(&["replicate", "--repos", s(&list), "--out", s(&fresh), "--jobs", "1", "--min-dev-commits", "5"]);
    assert!(o.status.success());
    for f in ["timelines/alpha.timeline.tsv", "timelines/beta.timeline.tsv", "rq1_acf.csv", "rq2_heatmap.csv"] {
        assert_eq!(std::fs::read(out.join(f)).unwrap(), std::fs::read(fresh.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn replicate_keeps_finished_repositories_after_a_failure() {
    let root = tempfile::tempdir().unwrap();
    fixture_repo(root.path(), "alpha", 1);
    let list = root.path().join("repos.txt");
    std::fs::write(&list, "alpha\nmissing\n").unwrap();
    let out = root.path().join("results");
    let o = cqual(&["replicate", "--repos", s(&list), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(out.join("timelines/alpha.timeline.tsv").is_file());
    assert!(out.join("timelines/alpha.manifest.txt").is_file());
}

#[test]
fn plan_from_counts() {
    let o = cqual(&["plan", "--n", "30", "--counts", "0,0,0,51,0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "stratum\tlow\thigh\tprojects\ttotal_engagements\traw_select\tn_select");
    assert!(text.contains("\n4\t10001\t100000\t51\t2805000\t30.000000\t30\n"), "{text}");

    let o = cqual(&["plan", "--n", "30", "--counts", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn plan_offline_without_cache_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let o = cqual(&["plan", "--n", "83", "--offline", "--cache-dir", s(dir.path())]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error[offline]"), "{}", stderr(&o));
}

#[test]
fn plan_replays_a_cached_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let q = cqual::sampler::CatalogQuery {
        language: "c".into(),
        engagement: cqual::sampler::Engagement::Stars,
        strata: vec![],
        created_before: None,
    };
    for (i, n) in [(1, 40), (2, 30), (3, 20), (4, 10), (5, 0)] {
        let url = cqual::sampler::stratum_query_url(&q, i);
        let name: String = <sha2::Sha256 as sha2::Digest>::digest(url.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        std::fs::write(dir.path().join(format!("{name}.json")), format!("{{\"total_count\": {n}}}")).unwrap();
    }
    let o = cqual(&["plan", "--n", "100", "--offline", "--cache-dir", s(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let n: Vec<u64> = stdout(&o).lines().skip(1).map(|l| l.rsplit('\t').next().unwrap().parse().unwrap()).collect();
    assert_eq!(n.len(), 5);
    assert_eq!(n.iter().sum::<u64>(), 100);
}

#[test]
fn config_file_sets_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.tsv");
    assert!(cqual(&["synth", "rq1", "--out", s(&t)]).status.success());
    let cfg = dir.path().join("cqual.conf");
    std::fs::write(&cfg, format!("timelines = {}\nmax_lag = 5\nformat = csv\n", s(&t))).unwrap();
    let out = dir.path().join("o");
    let o = cqual(&["--config", s(&cfg), "rq1", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out.join("rq1_acf.csv")).unwrap().lines().count(), 1 + 55);
    let o = cqual(&["--config", s(&cfg), "rq1", "--out", s(&out), "--max-lag", "7"]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(out.join("rq1_acf.csv")).unwrap().lines().count(), 1 + 77);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = cqual(&["--config", s(&cfg), "rq1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[config]"), "{}", stderr(&o));
}

#[test]
fn include_checks_history_continuity() {
    let root = tempfile::tempdir().unwrap();
    // One commit every 30 days for 11 years.
    let commits: Vec<repo::FixtureCommit> = (0..134)
        .map(|k| repo::FixtureCommit::new("a@b.c", 1_000_000_000 + k * 30 * 86_400, vec![("m.c", Some(&*format!("int x = {k};\n")))]))
        .collect();
    let dir = root.path().join("steady");
    repo::build(&dir, &commits);
    let anchor = (1_000_000_000i64 + 133 * 30 * 86_400).to_string();
    let o = cqual(&["include", "--repo", s(&dir), "--stars", "26", "--language", "C", "--anchor", &anchor]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("overall\tpass\n"), "{}", stdout(&o));

    let o = cqual(&["include", "--repo", s(&dir), "--stars", "5", "--forks", "5", "--language", "C", "--anchor", &anchor]);
    assert!(stdout(&o).contains("popularity\tfail"), "{}", stdout(&o));

    let late = (1_000_000_000i64 + 400 * 30 * 86_400).to_string();
    let o = cqual(&["include", "--repo", s(&dir), "--stars", "26", "--language", "C", "--anchor", &late]);
    assert!(stdout(&o).contains("continuity\tfail"), "{}", stdout(&o));
}
