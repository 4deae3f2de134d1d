//! Append-only on-disk cache of measurements keyed by git blob id. The file
//! doubles as the mining checkpoint: every computed blob is appended as soon
//! as it is known, so an interrupted run resumes where it stopped.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use crate::metrics::SourceMetrics;
use crate::style::StyleCounts;

use super::HistoryError;

const HEADER: &str = "# cqual blob cache v1";
const FLUSH_EVERY: usize = 32;
const FIELDS: usize = 1 + 12 + 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CachedMeasurement {
    pub metrics: SourceMetrics,
    pub style: StyleCounts,
}

impl CachedMeasurement {
    fn from_fields(fields: &[&str]) -> Option<(String, Self)> {
        if fields.len() != FIELDS || fields[0].len() < 40 {
            return None;
        }
        let nums: Vec<u64> = fields[1..].iter().map(|f| f.parse().ok()).collect::<Option<_>>()?;
        let counts: [u64; 12] = nums[..12].try_into().ok()?;
        let style = StyleCounts::from_values(&nums[12..])?;
        Some((
            fields[0].to_owned(),
            CachedMeasurement { metrics: SourceMetrics::from_counts(counts, &style), style },
        ))
    }

    fn line(&self, blob: &str) -> String {
        let mut line = blob.to_owned();
        for v in self.metrics.counts().into_iter().chain(self.style.values()) {
            line.push('\t');
            line.push_str(&v.to_string());
        }
        line.push('\n');
        line
    }
}

struct Appender {
    out: BufWriter<File>,
    pending: usize,
}

pub struct BlobCache {
    entries: RwLock<HashMap<String, CachedMeasurement>>,
    appender: Option<Mutex<Appender>>,
    path: Option<PathBuf>,
}

impl BlobCache {
    pub fn in_memory() -> Self {
        BlobCache { entries: RwLock::new(HashMap::new()), appender: None, path: None }
    }

    /// Opens or creates `dir/blobs.tsv`. A torn final line left by an
    /// interrupted run is dropped; a cache written by another format version
    /// is moved aside.
    pub fn open(dir: &Path) -> Result<Self, HistoryError> {
        fs::create_dir_all(dir).map_err(|e| HistoryError::Cache(format!("{}: {e}", dir.display())))?;
        let path = dir.join("blobs.tsv");
        let mut entries = HashMap::new();
        let mut good_len = 0u64;
        if let Ok(bytes) = fs::read(&path) {
            let text = String::from_utf8_lossy(&bytes);
            let mut lines = text.split_inclusive('\n');
            match lines.next() {
                Some(h) if h.trim_end() == HEADER && h.ends_with('\n') => {
                    good_len = h.len() as u64;
                    for line in lines {
                        let parsed = line
                            .strip_suffix('\n')
                            .and_then(|l| CachedMeasurement::from_fields(&l.split('\t').collect::<Vec<_>>()));
                        match parsed {
                            Some((blob, m)) => {
                                entries.insert(blob, m);
                                good_len += line.len() as u64;
                            }
                            None if !line.ends_with('\n') => break,
                            None => {
                                return Err(HistoryError::Cache(format!(
                                    "{}: corrupt entry at byte {good_len}",
                                    path.display()
                                )))
                            }
                        }
                    }
                }
                Some(_) => {
                    let aside = dir.join("blobs.tsv.old");
                    log::warn!("cache {} has an unknown format; moved to {}", path.display(), aside.display());
                    fs::rename(&path, &aside).map_err(|e| HistoryError::Cache(e.to_string()))?;
                }
                None => {}
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| HistoryError::Cache(format!("{}: {e}", path.display())))?;
        file.set_len(good_len).map_err(HistoryError::Io)?;
        let mut out = BufWriter::new(file);
        use std::io::Seek;
        out.seek(std::io::SeekFrom::End(0)).map_err(HistoryError::Io)?;
        if good_len == 0 {
            writeln!(out, "{HEADER}").map_err(HistoryError::Io)?;
            out.flush().map_err(HistoryError::Io)?;
        }
        Ok(BlobCache {
            entries: RwLock::new(entries),
            appender: Some(Mutex::new(Appender { out, pending: 0 })),
            path: Some(path),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, blob: &str) -> Option<CachedMeasurement> {
        self.entries.read().unwrap().get(blob).copied()
    }

    pub fn insert(&self, blob: &str, m: CachedMeasurement) -> Result<(), HistoryError> {
        if self.entries.write().unwrap().insert(blob.to_owned(), m).is_some() {
            return Ok(());
        }
        if let Some(appender) = &self.appender {
            let mut a = appender.lock().unwrap();
            a.out.write_all(m.line(blob).as_bytes()).map_err(HistoryError::Io)?;
            a.pending += 1;
            if a.pending >= FLUSH_EVERY {
                a.out.flush().map_err(HistoryError::Io)?;
                a.pending = 0;
            }
        }
        Ok(())
    }

    pub fn flush(&self) -> Result<(), HistoryError> {
        if let Some(appender) = &self.appender {
            let mut a = appender.lock().unwrap();
            a.out.flush().map_err(HistoryError::Io)?;
            a.pending = 0;
        }
        Ok(())
    }
}

impl Drop for BlobCache {
    fn drop(&mut self) {
        let _ = self.flush();
    }
}
