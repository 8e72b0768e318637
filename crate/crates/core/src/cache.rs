//! On-disk cache of harmonic edge lengths.
//!
//! One JSON document per `(geometry, level)`, named `<geometry>-level<m>.json`,
//! holds entries keyed `word/side/k` (`0` is the empty word). A document
//! written by a different [`CACHE_VERSION`] is ignored and replaced. Writers
//! take a lock file created with `create_new`; documents are replaced by
//! renaming a fully written temporary file, so readers never need the lock.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::curves::EdgeLengthTable;
use crate::error::{GasketError, Result};
use crate::ifs::Geometry;
use crate::word::{EdgeId, Side, Word};

/// Changes whenever the length algorithm could change a cached bit.
pub const CACHE_VERSION: &str = concat!("gasket-ncg ", env!("CARGO_PKG_VERSION"), " lengths/1");

const LOCK_NAME: &str = ".lock";
const LOCK_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheDocument {
    pub version: String,
    pub geometry: Geometry,
    pub level: usize,
    pub entries: BTreeMap<String, f64>,
}

/// A single cached length.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthCacheEntry {
    pub geometry: Geometry,
    pub edge: EdgeId,
    pub refinement: usize,
    pub length: f64,
}

impl LengthCacheEntry {
    pub fn key(&self) -> String {
        entry_key(&self.edge, self.refinement)
    }
}

pub fn entry_key(edge: &EdgeId, k: usize) -> String {
    format!("{edge}/{k}")
}

/// Counts of what a table request did.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub levels_read: usize,
    pub levels_written: usize,
}

#[derive(Clone, Debug)]
pub struct LengthCache {
    dir: PathBuf,
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

impl LengthCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        LengthCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn document_path(&self, geometry: Geometry, level: usize) -> PathBuf {
        self.dir.join(format!("{geometry}-level{level}.json"))
    }

    /// The current-version document, if one exists.
    pub fn read_document(&self, geometry: Geometry, level: usize) -> Result<Option<CacheDocument>> {
        let text = match fs::read_to_string(self.document_path(geometry, level)) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let doc: CacheDocument = serde_json::from_str(&text)?;
        let current = doc.version == CACHE_VERSION && doc.geometry == geometry && doc.level == level;
        Ok(current.then_some(doc))
    }

    pub fn get(&self, geometry: Geometry, edge: &EdgeId, k: usize) -> Result<Option<f64>> {
        Ok(self
            .read_document(geometry, edge.level())?
            .and_then(|doc| doc.entries.get(&entry_key(edge, k)).copied()))
    }

    /// All level-`m` lengths at refinement `k` in enumeration order, if every
    /// one is cached.
    pub fn load_level(&self, geometry: Geometry, level: usize, k: usize) -> Result<Option<Vec<f64>>> {
        let Some(doc) = self.read_document(geometry, level)? else {
            return Ok(None);
        };
        let mut out = Vec::with_capacity(3usize.pow(level as u32 + 1));
        for w in Word::all_of_length(level) {
            for side in Side::ALL {
                match doc.entries.get(&entry_key(&EdgeId::new(w.clone(), side), k)) {
                    Some(&x) => out.push(x),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(out))
    }

    /// Adds the level-`m` lengths at refinement `k` to the level's document.
    pub fn store_level(&self, geometry: Geometry, level: usize, k: usize, lengths: &[f64]) -> Result<()> {
        let expected = 3usize.pow(level as u32 + 1);
        if lengths.len() != expected {
            return Err(GasketError::InvalidArgument(format!(
                "level {level} needs {expected} lengths, got {}",
                lengths.len()
            )));
        }
        fs::create_dir_all(&self.dir)?;
        let _lock = self.lock()?;
        let mut doc = self.read_document(geometry, level)?.unwrap_or_else(|| CacheDocument {
            version: CACHE_VERSION.to_string(),
            geometry,
            level,
            entries: BTreeMap::new(),
        });
        let edges = Word::all_of_length(level).flat_map(|w| Side::ALL.map(|s| EdgeId::new(w.clone(), s)));
        for (edge, &length) in edges.zip(lengths) {
            doc.entries.insert(entry_key(&edge, k), length);
        }
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, &doc)?;
        tmp.write_all(b"\n")?;
        tmp.persist(self.document_path(geometry, level))
            .map_err(|e| GasketError::Io(e.error))?;
        Ok(())
    }

    /// Length table up to `max_level`, reading cached levels and computing
    /// and storing the rest. Euclidean lengths are exact and never cached.
    pub fn table(&self, geometry: Geometry, max_level: usize, k: usize) -> Result<(EdgeLengthTable, CacheStats)> {
        let mut stats = CacheStats::default();
        if geometry == Geometry::Euclidean {
            return Ok((EdgeLengthTable::euclidean(max_level), stats));
        }
        let mut levels = Vec::with_capacity(max_level + 1);
        for m in 0..=max_level {
            match self.load_level(geometry, m, k)? {
                Some(lv) => levels.push(lv),
                None => break,
            }
        }
        if levels.len() == max_level + 1 {
            stats.levels_read = levels.len();
            return Ok((EdgeLengthTable::from_levels(geometry, Some(k), levels)?, stats));
        }
        stats.levels_read = levels.len();
        let table = EdgeLengthTable::build(geometry, max_level, k)?;
        for m in levels.len()..=max_level {
            let lengths = table.level(m).expect("level within table");
            self.store_level(geometry, m, k, lengths)?;
            stats.levels_written += 1;
        }
        Ok((table, stats))
    }

    fn lock(&self) -> Result<LockGuard> {
        let path = self.dir.join(LOCK_NAME);
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(LockGuard(path));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists && start.elapsed() < LOCK_TIMEOUT => {
                    thread::sleep(Duration::from_millis(20));
                }
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    return Err(GasketError::Io(std::io::Error::new(
                        ErrorKind::WouldBlock,
                        format!("cache lock {} is held; remove it if no writer is running", path.display()),
                    )));
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LengthCache::new(dir.path());
        let (fresh, stats) = cache.table(Geometry::Harmonic, 2, 7).unwrap();
        assert_eq!(stats, CacheStats { levels_read: 0, levels_written: 3 });
        let (cached, stats) = cache.table(Geometry::Harmonic, 2, 7).unwrap();
        assert_eq!(stats, CacheStats { levels_read: 3, levels_written: 0 });
        for m in 0..=2 {
            let (a, b) = (fresh.level(m).unwrap(), cached.level(m).unwrap());
            assert!(a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()));
        }
        let e: EdgeId = EdgeId::new("12".parse().unwrap(), Side::R);
        assert_eq!(cache.get(Geometry::Harmonic, &e, 7).unwrap(), fresh.length(&e));
        assert_eq!(cache.get(Geometry::Harmonic, &e, 8).unwrap(), None);
        assert!(!dir.path().join(LOCK_NAME).exists());
    }

    #[test]
    fn refinements_share_a_document() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LengthCache::new(dir.path());
        cache.table(Geometry::Harmonic, 1, 4).unwrap();
        cache.table(Geometry::Harmonic, 1, 5).unwrap();
        let doc = cache.read_document(Geometry::Harmonic, 1).unwrap().unwrap();
        assert_eq!(doc.entries.len(), 18);
        assert!(doc.entries.contains_key("3/b/5"));
        let root = cache.read_document(Geometry::Harmonic, 0).unwrap().unwrap();
        assert!(root.entries.contains_key("0/l/4"));
    }

    #[test]
    fn stale_versions_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LengthCache::new(dir.path());
        cache.table(Geometry::Harmonic, 0, 3).unwrap();
        let path = cache.document_path(Geometry::Harmonic, 0);
        let text = fs::read_to_string(&path).unwrap().replace(CACHE_VERSION, "old");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.load_level(Geometry::Harmonic, 0, 3).unwrap(), None);
        let (_, stats) = cache.table(Geometry::Harmonic, 0, 3).unwrap();
        assert_eq!(stats.levels_written, 1);
    }

    #[test]
    fn euclidean_is_not_cached() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LengthCache::new(dir.path().join("sub"));
        let (t, stats) = cache.table(Geometry::Euclidean, 3, 0).unwrap();
        assert_eq!(t.level(3).unwrap()[0], 0.125);
        assert_eq!(stats, CacheStats::default());
        assert!(!dir.path().join("sub").exists());
    }
}
