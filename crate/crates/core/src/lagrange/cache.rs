use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::finmod::{Matrix, RingCtx, Submodule};

/// Bump when the enumeration semantics or the record encoding change;
/// files written under another version are ignored and regenerated.
pub const CACHE_FORMAT_VERSION: u32 = 1;

const MAGIC: &[u8; 8] = b"HLABENUM";

/// Identifies one enumeration result set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CacheKey {
    Tp { g: usize, p: u32 },
    Tpi { g: usize, p: u32, i: usize },
}

impl CacheKey {
    pub fn label(&self) -> String {
        match self {
            CacheKey::Tp { g, p } => format!("tp:g{g}:p{p}:v{CACHE_FORMAT_VERSION}"),
            CacheKey::Tpi { g, p, i } => format!("tpi:g{g}:p{p}:i{i}:v{CACHE_FORMAT_VERSION}"),
        }
    }

    /// Content address: hex SHA-256 of the label.
    pub fn file_name(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.label().as_bytes());
        let digest = h.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        format!("{hex}.enum")
    }

    fn ring(&self) -> Result<RingCtx> {
        match self {
            CacheKey::Tp { p, .. } => RingCtx::fp(*p),
            CacheKey::Tpi { p, .. } => RingCtx::zp2(*p),
        }
    }

    fn ambient(&self) -> usize {
        match self {
            CacheKey::Tp { g, .. } | CacheKey::Tpi { g, .. } => 2 * g,
        }
    }
}

/// On-disk cache of canonical submodule lists.
///
/// File layout (little-endian): magic, format version (u32), label length
/// (u32) + label bytes, record count (u64), then each record as
/// u32 length + that many u32 entries of the canonical generator matrix
/// (row count, column count, entries). Corrupt or mismatched files are
/// treated as absent.
#[derive(Debug, Clone)]
pub struct EnumerationCache {
    dir: PathBuf,
}

impl EnumerationCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        EnumerationCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Reads a cached list; any validation failure yields None.
    pub fn load(&self, key: &CacheKey) -> Option<Vec<Submodule>> {
        let path = self.path_for(key);
        let bytes = fs::read(path).ok()?;
        parse_records(key, &bytes)
    }

    pub fn store(&self, key: &CacheKey, subs: &[Submodule]) -> Result<()> {
        fs::create_dir_all(&self.dir)
            .map_err(|e| Error::domain(format!("cache dir {}: {e}", self.dir.display())))?;
        let path = self.path_for(key);
        let tmp = path.with_extension("tmp");
        let mut buf: Vec<u8> = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&CACHE_FORMAT_VERSION.to_le_bytes());
        let label = key.label();
        buf.extend_from_slice(&(label.len() as u32).to_le_bytes());
        buf.extend_from_slice(label.as_bytes());
        buf.extend_from_slice(&(subs.len() as u64).to_le_bytes());
        for s in subs {
            let m = s.gens();
            let mut words: Vec<u32> = Vec::with_capacity(2 + m.entries().len());
            words.push(m.rows() as u32);
            words.push(m.cols() as u32);
            words.extend_from_slice(m.entries());
            buf.extend_from_slice(&(words.len() as u32).to_le_bytes());
            for w in words {
                buf.extend_from_slice(&w.to_le_bytes());
            }
        }
        let mut f = fs::File::create(&tmp)
            .map_err(|e| Error::domain(format!("cache write {}: {e}", tmp.display())))?;
        f.write_all(&buf)
            .and_then(|_| f.flush())
            .map_err(|e| Error::domain(format!("cache write {}: {e}", tmp.display())))?;
        drop(f);
        fs::rename(&tmp, &path)
            .map_err(|e| Error::domain(format!("cache rename {}: {e}", path.display())))?;
        Ok(())
    }

    /// Returns the cached list, computing and persisting it on a miss.
    /// The boolean reports whether the call was a cache hit.
    pub fn get_or_compute<F>(&self, key: &CacheKey, compute: F) -> Result<(Vec<Submodule>, bool)>
    where
        F: FnOnce() -> Result<Vec<Submodule>>,
    {
        if let Some(list) = self.load(key) {
            return Ok((list, true));
        }
        let list = compute()?;
        self.store(key, &list)?;
        Ok((list, false))
    }

    /// (file name, label if readable, record count) for every cache file.
    pub fn status(&self) -> Result<Vec<(String, Option<String>, Option<u64>)>> {
        let mut out = Vec::new();
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(_) => return Ok(out),
        };
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if !name.ends_with(".enum") {
                continue;
            }
            let mut header = (None, None);
            if let Ok(bytes) = fs::read(entry.path()) {
                header = parse_header(&bytes);
            }
            out.push((name, header.0, header.1));
        }
        out.sort();
        Ok(out)
    }

    /// Deletes every cache file, returning how many were removed.
    pub fn purge(&self) -> Result<usize> {
        let mut removed = 0usize;
        let entries = match fs::read_dir(&self.dir) {
            Ok(e) => e,
            Err(_) => return Ok(0),
        };
        for entry in entries.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            if name.ends_with(".enum") || name.ends_with(".tmp") {
                fs::remove_file(entry.path())
                    .map_err(|e| Error::domain(format!("cache purge: {e}")))?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

fn parse_header(bytes: &[u8]) -> (Option<String>, Option<u64>) {
    let mut r = bytes;
    let mut magic = [0u8; 8];
    if r.read_exact(&mut magic).is_err() || &magic != MAGIC {
        return (None, None);
    }
    let mut u32buf = [0u8; 4];
    if r.read_exact(&mut u32buf).is_err() {
        return (None, None);
    }
    if u32::from_le_bytes(u32buf) != CACHE_FORMAT_VERSION {
        return (None, None);
    }
    if r.read_exact(&mut u32buf).is_err() {
        return (None, None);
    }
    let label_len = u32::from_le_bytes(u32buf) as usize;
    if r.len() < label_len {
        return (None, None);
    }
    let label = String::from_utf8_lossy(&r[..label_len]).into_owned();
    r = &r[label_len..];
    let mut u64buf = [0u8; 8];
    if r.read_exact(&mut u64buf).is_err() {
        return (Some(label), None);
    }
    (Some(label), Some(u64::from_le_bytes(u64buf)))
}

fn parse_records(key: &CacheKey, bytes: &[u8]) -> Option<Vec<Submodule>> {
    let (label, count) = parse_header(bytes);
    if label.as_deref() != Some(key.label().as_str()) {
        return None;
    }
    let count = count?;
    let header_len = 8 + 4 + 4 + key.label().len() + 8;
    let mut r = &bytes[header_len..];
    let ctx = key.ring().ok()?;
    let ambient = key.ambient();

    let mut out = Vec::with_capacity(count as usize);
    let mut u32buf = [0u8; 4];
    for _ in 0..count {
        if r.read_exact(&mut u32buf).is_err() {
            return None;
        }
        let words = u32::from_le_bytes(u32buf) as usize;
        if words < 2 || r.len() < words * 4 {
            return None;
        }
        let mut vals = Vec::with_capacity(words);
        for _ in 0..words {
            r.read_exact(&mut u32buf).ok()?;
            vals.push(u32::from_le_bytes(u32buf));
        }
        let rows = vals[0] as usize;
        let cols = vals[1] as usize;
        if cols != ambient || vals.len() != 2 + rows * cols {
            return None;
        }
        let m = Matrix::from_flat(ctx, rows, cols, vals[2..].to_vec());
        let sub = Submodule::canonicalize(&m);
        if sub.gens() != &m {
            return None; // stored record was not canonical
        }
        out.push(sub);
    }
    if !r.is_empty() {
        return None;
    }
    // canonical lists are sorted
    if !out.windows(2).all(|w| w[0] < w[1]) {
        return None;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lagrange::enumerate::{enumerate_tp, DEFAULT_BUDGET};

    #[test]
    fn round_trip_and_hit_flag() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumerationCache::new(dir.path());
        let key = CacheKey::Tp { g: 2, p: 2 };
        let (first, hit1) = cache
            .get_or_compute(&key, || enumerate_tp(2, 2, DEFAULT_BUDGET))
            .unwrap();
        assert!(!hit1);
        let (second, hit2) = cache
            .get_or_compute(&key, || panic!("must not recompute"))
            .unwrap();
        assert!(hit2);
        assert_eq!(first, second);
    }

    #[test]
    fn corrupt_file_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumerationCache::new(dir.path());
        let key = CacheKey::Tp { g: 1, p: 3 };
        let (list, _) = cache
            .get_or_compute(&key, || enumerate_tp(1, 3, DEFAULT_BUDGET))
            .unwrap();
        // truncate the file
        let path = cache.path_for(&key);
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() / 2]).unwrap();
        assert!(cache.load(&key).is_none());
        let (again, hit) = cache
            .get_or_compute(&key, || enumerate_tp(1, 3, DEFAULT_BUDGET))
            .unwrap();
        assert!(!hit);
        assert_eq!(list, again);
    }

    #[test]
    fn status_and_purge() {
        let dir = tempfile::tempdir().unwrap();
        let cache = EnumerationCache::new(dir.path());
        assert!(cache.status().unwrap().is_empty());
        let key = CacheKey::Tpi { g: 3, p: 2, i: 1 };
        cache
            .get_or_compute(&key, || {
                crate::lagrange::enumerate::enumerate_tpi(3, 1, 2, DEFAULT_BUDGET)
            })
            .unwrap();
        let st = cache.status().unwrap();
        assert_eq!(st.len(), 1);
        assert_eq!(st[0].1.as_deref(), Some(key.label().as_str()));
        assert_eq!(st[0].2, Some(2520));
        assert_eq!(cache.purge().unwrap(), 1);
        assert!(cache.status().unwrap().is_empty());
    }
}
