//! Content-addressed memo of detection results, optionally persisted as
//! JSON lines.
//!
//! The file is append-only during a run; a later record for the same hash
//! wins. Records written by another detector version are ignored, and
//! unreadable lines cause the file to be compacted on open.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};

use super::{detect_features_bytes, FeatureSet, DETECTOR_VERSION};
use crate::hash::ContentHash;

#[derive(Serialize, Deserialize)]
struct Record {
    hash: ContentHash,
    flags: u16,
    parsed_ok: bool,
    detector_version: u32,
}

/// What [`DetectionCache::open`] found on disk.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadStats {
    pub loaded: usize,
    pub stale: usize,
    pub corrupt: usize,
}

pub struct DetectionCache {
    entries: RwLock<HashMap<ContentHash, FeatureSet>>,
    writer: Mutex<Option<BufWriter<File>>>,
    path: Option<PathBuf>,
    parses: AtomicU64,
    hits: AtomicU64,
    load_stats: LoadStats,
}

impl DetectionCache {
    /// A cache that lives only as long as this value.
    pub fn in_memory() -> DetectionCache {
        DetectionCache {
            entries: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
            path: None,
            parses: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            load_stats: LoadStats::default(),
        }
    }

    /// Loads `path` if it exists and appends new results to it.
    ///
    /// If the file cannot be read or opened for append, the cache keeps
    /// working in memory and logs a warning.
    pub fn open(path: impl AsRef<Path>) -> DetectionCache {
        let path = path.as_ref().to_path_buf();
        let mut cache = DetectionCache::in_memory();
        cache.path = Some(path.clone());

        let (entries, stats) = match load(&path) {
            Ok(r) => r,
            Err(e) => {
                log::warn!("detection cache {}: {e}; starting empty", path.display());
                (HashMap::new(), LoadStats::default())
            }
        };
        cache.load_stats = stats;
        if stats.corrupt > 0 || stats.stale > 0 {
            if let Err(e) = rewrite(&path, &entries) {
                log::warn!("detection cache {}: compaction failed: {e}", path.display());
            }
        }
        *cache.entries.get_mut().unwrap() = entries;

        let writer = path
            .parent()
            .map_or(Ok(()), |dir| if dir.as_os_str().is_empty() { Ok(()) } else { fs::create_dir_all(dir) })
            .and_then(|()| OpenOptions::new().create(true).append(true).open(&path));
        match writer {
            Ok(f) => *cache.writer.get_mut().unwrap() = Some(BufWriter::new(f)),
            Err(e) => log::warn!("detection cache {}: {e}; not persisting", path.display()),
        }
        cache
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn load_stats(&self) -> LoadStats {
        self.load_stats
    }

    /// Number of times the parser actually ran through this cache.
    pub fn parse_count(&self) -> u64 {
        self.parses.load(Ordering::Relaxed)
    }

    pub fn hit_count(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, hash: &ContentHash) -> Option<FeatureSet> {
        self.entries.read().unwrap().get(hash).copied()
    }

    /// Returns the stored result for `hash`, or detects and stores it.
    ///
    /// `hash` must be the digest of `source`.
    pub fn detect_cached(&self, hash: &ContentHash, source: &[u8]) -> FeatureSet {
        if let Some(set) = self.get(hash) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return set;
        }
        self.parses.fetch_add(1, Ordering::Relaxed);
        let set = detect_features_bytes(source);
        self.insert(*hash, set);
        set
    }

    fn insert(&self, hash: ContentHash, set: FeatureSet) {
        self.entries.write().unwrap().insert(hash, set);
        let mut writer = self.writer.lock().unwrap();
        if let Some(w) = writer.as_mut() {
            if let Err(e) = write_record(w, &hash, set) {
                log::warn!("detection cache write failed: {e}; not persisting further results");
                *writer = None;
            }
        }
    }

    pub fn flush(&self) -> io::Result<()> {
        match self.writer.lock().unwrap().as_mut() {
            Some(w) => w.flush(),
            None => Ok(()),
        }
    }
}

impl Drop for DetectionCache {
    fn drop(&mut self) {
        if let Err(e) = self.flush() {
            log::warn!("detection cache flush failed: {e}");
        }
    }
}

fn write_record(w: &mut impl Write, hash: &ContentHash, set: FeatureSet) -> io::Result<()> {
    let record = Record {
        hash: *hash,
        flags: set.bits(),
        parsed_ok: set.parsed_ok(),
        detector_version: DETECTOR_VERSION,
    };
    serde_json::to_writer(&mut *w, &record)?;
    w.write_all(b"\n")
}

fn load(path: &Path) -> io::Result<(HashMap<ContentHash, FeatureSet>, LoadStats)> {
    let mut entries = HashMap::new();
    let mut stats = LoadStats::default();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok((entries, stats)),
        Err(e) => return Err(e),
    };
    for line in BufReader::new(file).split(b'\n') {
        let line = line?;
        if line.iter().all(u8::is_ascii_whitespace) {
            continue;
        }
        let Ok(record) = serde_json::from_slice::<Record>(&line) else {
            stats.corrupt += 1;
            continue;
        };
        if record.detector_version != DETECTOR_VERSION {
            stats.stale += 1;
            continue;
        }
        match FeatureSet::from_bits(record.flags, record.parsed_ok) {
            Some(set) => {
                entries.insert(record.hash, set);
                stats.loaded += 1;
            }
            None => stats.corrupt += 1,
        }
    }
    Ok((entries, stats))
}

fn rewrite(path: &Path, entries: &HashMap<ContentHash, FeatureSet>) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        let mut sorted: Vec<_> = entries.iter().collect();
        sorted.sort_by_key(|(h, _)| **h);
        for (hash, set) in sorted {
            write_record(&mut w, hash, *set)?;
        }
        w.flush()?;
    }
    fs::rename(tmp, path)
}
