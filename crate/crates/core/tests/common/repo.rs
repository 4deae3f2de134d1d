//! Builds fixture git repositories through `git fast-import`.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

#[derive(Clone, Debug)]
pub struct FixtureCommit {
    pub committer: String,
    pub time: i64,
    /// `(path, Some(content))` writes a file, `(path, None)` deletes it.
    pub files: Vec<(String, Option<Vec<u8>>)>,
    /// Commit this one merges in, by index into the commit list.
    pub merge: Option<usize>,
    /// Parent by index; defaults to the previous commit on the same branch.
    pub branch: &'static str,
}

impl FixtureCommit {
    pub fn new(committer: &str, time: i64, files: Vec<(&str, Option<&str>)>) -> Self {
        FixtureCommit {
            committer: committer.into(),
            time,
            files: files
                .into_iter()
                .map(|(p, c)| (p.to_owned(), c.map(|c| c.as_bytes().to_vec())))
                .collect(),
            merge: None,
            branch: "main",
        }
    }

    pub fn on(mut self, branch: &'static str) -> Self {
        self.branch = branch;
        self
    }

    pub fn merging(mut self, commit: usize) -> Self {
        self.merge = Some(commit);
        self
    }
}

pub fn git(dir: &Path, args: &[&str]) -> String {
    let out = Command::new("git").arg("-C").arg(dir).args(args).output().expect("git runs");
    assert!(out.status.success(), "git {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Creates a repository at `dir` whose `main` branch holds `commits`.
/// Commits on other branches start from the `main` commit preceding them.
pub fn build(dir: &Path, commits: &[FixtureCommit]) {
    std::fs::create_dir_all(dir).unwrap();
    git(dir, &["init", "-q", "-b", "main"]);
    let mut stream = Vec::new();
    let mut last_on: std::collections::HashMap<&str, usize> = Default::default();
    for (i, c) in commits.iter().enumerate() {
        let mark = i + 1;
        writeln!(stream, "commit refs/heads/{}", c.branch).unwrap();
        writeln!(stream, "mark :{mark}").unwrap();
        let name = c.committer.split('@').next().unwrap_or("dev");
        writeln!(stream, "author {name} <{}> {} +0000", c.committer, c.time).unwrap();
        writeln!(stream, "committer {name} <{}> {} +0000", c.committer, c.time).unwrap();
        let msg = format!("change {mark}\n");
        writeln!(stream, "data {}\n{msg}", msg.len()).unwrap();
        let parent = last_on.get(c.branch).copied().or_else(|| last_on.get("main").copied());
        if let Some(p) = parent {
            writeln!(stream, "from :{}", p + 1).unwrap();
        }
        if let Some(m) = c.merge {
            writeln!(stream, "merge :{}", m + 1).unwrap();
        }
        for (path, content) in &c.files {
            match content {
                Some(bytes) => {
                    writeln!(stream, "M 100644 inline \"{}\"", path.replace('\\', "\\\\").replace('"', "\\\"").replace('\t', "\\t")).unwrap();
                    writeln!(stream, "data {}", bytes.len()).unwrap();
                    stream.extend_from_slice(bytes);
                    stream.push(b'\n');
                }
                None => writeln!(stream, "D \"{path}\"").unwrap(),
            }
        }
        stream.push(b'\n');
        last_on.insert(c.branch, i);
    }
    let mut child = Command::new("git")
        .arg("-C")
        .arg(dir)
        .args(["fast-import", "--quiet"])
        .stdin(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&stream).unwrap();
    assert!(child.wait().unwrap().success());
    git(dir, &["checkout", "-q", "-f", "main"]);
}

/// Deterministic C-like source of roughly `lines` lines that varies with `seed`.
pub fn c_source(seed: u64, lines: usize) -> String {
    let mut s = String::from("#include <stdio.h>\n\n/* generated fixture */\n");
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    let mut f = 0;
    while s.lines().count() < lines {
        f += 1;
        s.push_str(&format!("static int\nfn_{seed}_{f}(int a, int b)\n{{\n"));
        for _ in 0..(5 + next() % 20) {
            match next() % 6 {
                0 => s.push_str("\tif (a > b) {\n\t\ta = a - b;\n\t}\n"),
                1 => s.push_str("\tfor (int i = 0; i < b; i++)\n\t\ta += i;\n"),
                2 => s.push_str("\t/* TODO: tune */\n\tb=b*2;\n"),
                3 => s.push_str("\twhile (a < 100) {\n\t\tif (b) {\n\t\t\ta++;\n\t\t}\n\t}\n"),
                4 => s.push_str("\tprintf(\"%d\\n\", a);\n"),
                _ => s.push_str("\ta = a ^ (b << 1); \n"),
            }
        }
        s.push_str("\treturn a;\n}\n\n");
    }
    s
}

/// A project whose files evolve one function at a time: `commits` commits
/// by `developers` committers over `files` C files, so every file collects
/// a long revision history with gradually drifting metrics.
pub fn evolving_project(seed: u64, files: usize, developers: usize, commits: usize) -> Vec<FixtureCommit> {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as usize
    };
    let mut bodies: Vec<Vec<String>> = vec![Vec::new(); files];
    let mut out = Vec::with_capacity(commits);
    for k in 0..commits {
        let f = if k < files { k } else { next() % files };
        let dev = next() % developers;
        let funcs = &mut bodies[f];
        let block = function_block(&mut next, seed, k, dev);
        if funcs.len() < 3 || next() % 3 == 0 {
            funcs.push(block);
        } else {
            let at = next() % funcs.len();
            funcs[at] = block;
        }
        let mut text = format!("/* file {f} */\n#include <stdlib.h>\n\n");
        for b in funcs.iter() {
            text.push_str(b);
        }
        let path = format!("src/file_{f:02}.c");
        let mut c = FixtureCommit::new(&format!("dev{dev}@example.org"), 1_500_000_000 + 3600 * k as i64, vec![]);
        c.files.push((path, Some(text.into_bytes())));
        out.push(c);
    }
    out
}

fn function_block(next: &mut impl FnMut() -> usize, seed: u64, k: usize, dev: usize) -> String {
    // Each developer has a habitual layout, so style drifts with authorship.
    let (open, space) = if dev.is_multiple_of(2) { ("\n{\n", " ") } else { (" {\n", "") };
    let mut s = format!("static int\nf{seed}_{k}(int a, int b){open}");
    for _ in 0..(2 + next() % 10) {
        match next() % 7 {
            0 => s.push_str(&format!("\tif{space}(a > b) {{\n\t\ta -= b;\n\t}}\n")),
            1 => s.push_str(&format!("\tfor{space}(int i = 0; i < b; i++)\n\t\ta += i;\n")),
            2 => s.push_str("\t/* XXX: revisit this */\n\tb = b * 2;\n"),
            3 => s.push_str(&format!("\twhile{space}(a < 100) {{\n\t\tif{space}(b) {{\n\t\t\ta++;\n\t\t}}\n\t}}\n")),
            4 => s.push_str("\tif (!a)\n\t\tgoto out;\n"),
            5 => s.push_str("\t// shift\n\ta = a ^ (b << 1);\n"),
            _ => s.push_str("\ta=a+1;\n"),
        }
    }
    s.push_str("out:\n\treturn a;\n}\n\n");
    s
}
