//! Thin wrappers over the `git` command line.

use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use super::HistoryError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Revision {
    pub commit: String,
    pub committer: String,
    pub timestamp: i64,
}

/// One file version introduced by a commit on the first-parent chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Change {
    pub path: String,
    /// `None` when the commit deletes the path.
    pub blob: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Git {
    repo: PathBuf,
}

fn parse_header(field: &str) -> Result<Revision, HistoryError> {
    let bad = || HistoryError::Parse(format!("unexpected log header `{field}`"));
    let (commit, rest) = field.split_once('|').ok_or_else(bad)?;
    let (committer, ts) = rest.rsplit_once('|').ok_or_else(bad)?;
    if commit.len() != 40 || !commit.bytes().all(|b| b.is_ascii_hexdigit()) {
        return Err(bad());
    }
    Ok(Revision {
        commit: commit.to_owned(),
        committer: committer.to_owned(),
        timestamp: ts.trim().parse().map_err(|_| bad())?,
    })
}

impl Git {
    pub fn open(repo: &Path) -> Result<Self, HistoryError> {
        let git = Git { repo: repo.to_path_buf() };
        if !repo.is_dir() {
            return Err(HistoryError::NotARepository(repo.to_path_buf()));
        }
        git.output(&["rev-parse", "--git-dir"])
            .map_err(|_| HistoryError::NotARepository(repo.to_path_buf()))?;
        Ok(git)
    }

    pub fn path(&self) -> &Path {
        &self.repo
    }

    fn command(&self) -> Command {
        let mut cmd = Command::new("git");
        cmd.arg("-C").arg(&self.repo).env("GIT_TERMINAL_PROMPT", "0");
        cmd
    }

    fn output(&self, args: &[&str]) -> Result<Vec<u8>, HistoryError> {
        let out = self.command().args(args).stderr(Stdio::piped()).output().map_err(HistoryError::Spawn)?;
        if !out.status.success() {
            return Err(HistoryError::Git {
                command: args.join(" "),
                stderr: String::from_utf8_lossy(&out.stderr).trim().to_owned(),
            });
        }
        Ok(out.stdout)
    }

    /// Commit at HEAD, or `None` for a repository without commits.
    pub fn head(&self) -> Result<Option<String>, HistoryError> {
        match self.output(&["rev-parse", "--verify", "-q", "HEAD"]) {
            Ok(out) => Ok(Some(String::from_utf8_lossy(&out).trim().to_owned())),
            Err(HistoryError::Git { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Committer timestamps of every commit reachable from HEAD.
    pub fn commit_times(&self) -> Result<Vec<i64>, HistoryError> {
        if self.head()?.is_none() {
            return Ok(Vec::new());
        }
        let out = self.output(&["log", "--format=%ct"])?;
        String::from_utf8_lossy(&out)
            .lines()
            .filter(|l| !l.is_empty())
            .map(|l| l.parse().map_err(|_| HistoryError::Parse(format!("bad timestamp `{l}`"))))
            .collect()
    }

    /// Revisions touching `path` on the first-parent chain of HEAD, oldest first.
    pub fn list_revisions(&self, path: &str) -> Result<Vec<Revision>, HistoryError> {
        if self.head()?.is_none() {
            return Ok(Vec::new());
        }
        let out = self.output(&["log", "--first-parent", "--reverse", "--format=%H|%ce|%ct", "--", path])?;
        String::from_utf8_lossy(&out).lines().filter(|l| !l.is_empty()).map(parse_header).collect()
    }

    /// Every first-parent commit of HEAD, oldest first, with the paths it
    /// changed relative to its first parent.
    pub fn first_parent_changes(&self) -> Result<Vec<(Revision, Vec<Change>)>, HistoryError> {
        if self.head()?.is_none() {
            return Ok(Vec::new());
        }
        let out = self.output(&[
            "log",
            "--first-parent",
            "--reverse",
            "--diff-merges=first-parent",
            "--no-renames",
            "--raw",
            "--no-abbrev",
            "-z",
            "--format=%x01%H|%ce|%ct",
        ])?;
        let mut commits: Vec<(Revision, Vec<Change>)> = Vec::new();
        let mut fields = out.split(|&b| b == 0);
        while let Some(field) = fields.next() {
            let field = field.strip_prefix(b"\n").unwrap_or(field);
            if let Some(header) = field.strip_prefix(b"\x01") {
                commits.push((parse_header(&String::from_utf8_lossy(header))?, Vec::new()));
            } else if let Some(meta) = field.strip_prefix(b":") {
                let meta = String::from_utf8_lossy(meta);
                let parts: Vec<&str> = meta.split(' ').collect();
                let path = fields
                    .next()
                    .ok_or_else(|| HistoryError::Parse("raw entry without a path".into()))?;
                let (Some(dst_mode), Some(dst_blob), Some(status)) = (parts.get(1), parts.get(3), parts.get(4))
                else {
                    return Err(HistoryError::Parse(format!("bad raw entry `{meta}`")));
                };
                let last = commits
                    .last_mut()
                    .ok_or_else(|| HistoryError::Parse("raw entry before any commit".into()))?;
                let deleted = status.starts_with('D') || dst_blob.bytes().all(|b| b == b'0');
                // Submodule links have no blob in this repository.
                let blob = (!deleted && *dst_mode != "160000").then(|| dst_blob.to_string());
                if deleted || blob.is_some() {
                    last.1.push(Change { path: String::from_utf8_lossy(path).into_owned(), blob });
                }
            } else if !field.is_empty() {
                return Err(HistoryError::Parse(format!(
                    "unexpected log output `{}`",
                    String::from_utf8_lossy(field)
                )));
            }
        }
        Ok(commits)
    }

    /// Content of `path` at `commit`, as printed by `git show`.
    pub fn show(&self, commit: &str, path: &str) -> Result<Vec<u8>, HistoryError> {
        self.output(&["show", &format!("{commit}:{path}")])
    }

    pub fn blob_reader(&self) -> Result<BlobReader, HistoryError> {
        let mut child = self
            .command()
            .args(["cat-file", "--batch"])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(HistoryError::Spawn)?;
        let stdin = BufWriter::new(child.stdin.take().expect("piped stdin"));
        let stdout = BufReader::with_capacity(1 << 16, child.stdout.take().expect("piped stdout"));
        Ok(BlobReader { child, stdin, stdout })
    }
}

/// Long-lived `git cat-file --batch` process streaming blob contents.
pub struct BlobReader {
    child: Child,
    stdin: BufWriter<ChildStdin>,
    stdout: BufReader<ChildStdout>,
}

impl BlobReader {
    /// Reads a blob by id; `Ok(None)` when the object is missing or not a blob.
    pub fn read(&mut self, blob: &str) -> Result<Option<Vec<u8>>, HistoryError> {
        writeln!(self.stdin, "{blob}").map_err(HistoryError::Io)?;
        self.stdin.flush().map_err(HistoryError::Io)?;
        let mut header = String::new();
        if self.stdout.read_line(&mut header).map_err(HistoryError::Io)? == 0 {
            return Err(HistoryError::Parse("cat-file exited early".into()));
        }
        let parts: Vec<&str> = header.split_whitespace().collect();
        match parts.as_slice() {
            [_, "missing"] | [_, "ambiguous"] => Ok(None),
            [_, kind, size] => {
                let size: usize =
                    size.parse().map_err(|_| HistoryError::Parse(format!("bad cat-file header `{header}`")))?;
                let mut buf = vec![0u8; size + 1];
                self.stdout.read_exact(&mut buf).map_err(HistoryError::Io)?;
                buf.pop();
                Ok((*kind == "blob").then_some(buf))
            }
            _ => Err(HistoryError::Parse(format!("bad cat-file header `{}`", header.trim()))),
        }
    }
}

impl Drop for BlobReader {
    fn drop(&mut self) {
        let _ = self.stdin.flush();
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
