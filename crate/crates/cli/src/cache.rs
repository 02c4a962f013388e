//! File-backed store of computed sequence values.
//!
//! One JSON document, keyed by `method|spec|n`. A value, once stored, is
//! never replaced by a different one: a disagreement means either the
//! cache or the code is wrong, and we refuse to guess which.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use permpat::enumerate::Method;
use permpat::RestrictionSpec;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PATH: &str = ".permpat-cache.json";
pub const ENV_VAR: &str = "PERMPAT_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedValue {
    pub value: u64,
    pub method: String,
    /// Version of the tool that computed the value.
    pub version: String,
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Document {
    entries: BTreeMap<String, CachedValue>,
}

#[derive(Debug)]
pub enum CacheError {
    Io(PathBuf, std::io::Error),
    Corrupt(PathBuf, serde_json::Error),
    Conflict { key: String, cached: u64, computed: u64 },
}

impl std::fmt::Display for CacheError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CacheError::Io(p, e) => write!(f, "cache {}: {e}", p.display()),
            CacheError::Corrupt(p, e) => write!(f, "cache {} is not valid: {e}", p.display()),
            CacheError::Conflict { key, cached, computed } => write!(
                f,
                "cache conflict for {key}: stored {cached}, computed {computed}; refusing to overwrite"
            ),
        }
    }
}

#[derive(Debug)]
pub struct CacheStore {
    path: Option<PathBuf>,
    doc: Document,
    dirty: bool,
}

pub fn key(method: Method, spec: &RestrictionSpec, n: usize) -> String {
    format!("{method}|{spec}|{n}")
}

impl CacheStore {
    /// An in-memory store that is never written.
    pub fn disabled() -> Self {
        Self { path: None, doc: Document::default(), dirty: false }
    }

    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let path = path.into();
        let doc = match fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).map_err(|e| CacheError::Corrupt(path.clone(), e))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Document::default(),
            Err(e) => return Err(CacheError::Io(path, e)),
        };
        Ok(Self { path: Some(path), doc, dirty: false })
    }

    pub fn get(&self, method: Method, spec: &RestrictionSpec, n: usize) -> Option<u64> {
        self.doc.entries.get(&key(method, spec, n)).map(|v| v.value)
    }

    pub fn insert(&mut self, method: Method, spec: &RestrictionSpec, n: usize, value: u64) -> Result<(), CacheError> {
        let key = key(method, spec, n);
        if let Some(existing) = self.doc.entries.get(&key) {
            if existing.value != value {
                return Err(CacheError::Conflict { key, cached: existing.value, computed: value });
            }
            return Ok(());
        }
        self.doc.entries.insert(
            key,
            CachedValue {
                value,
                method: method.to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
        );
        self.dirty = true;
        Ok(())
    }

    /// Returns the cached value, or computes, stores and returns it.
    pub fn get_or_compute<E>(
        &mut self,
        method: Method,
        spec: &RestrictionSpec,
        n: usize,
        compute: impl FnOnce() -> Result<u64, E>,
    ) -> Result<u64, E>
    where
        E: From<CacheError>,
    {
        if let Some(v) = self.get(method, spec, n) {
            return Ok(v);
        }
        let v = compute()?;
        self.insert(method, spec, n, v)?;
        Ok(v)
    }

    /// Writes the document if anything changed, via a temporary file in the
    /// same directory so readers never see a partial file.
    pub fn flush(&mut self) -> Result<(), CacheError> {
        let Some(path) = &self.path else { return Ok(()) };
        if !self.dirty {
            return Ok(());
        }
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => Path::new(".").to_path_buf(),
        };
        let io = |e| CacheError::Io(path.clone(), e);
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
        let text = serde_json::to_string_pretty(&self.doc).expect("cache document serializes");
        tmp.write_all(text.as_bytes()).map_err(io)?;
        tmp.write_all(b"\n").map_err(io)?;
        tmp.persist(path).map_err(|e| io(e.error))?;
        self.dirty = false;
        Ok(())
    }
}
