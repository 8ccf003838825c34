//! Persisted result cache: a JSON object keyed by
//! `"<tool version>|<ring spec>|<operation>"`, rewritten atomically.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const CACHE_ENV: &str = "RINGLAB_CACHE";

#[derive(Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, Value>,
}

#[derive(Debug, Default)]
pub struct ResultCache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, Value>,
    dirty: bool,
}

/// `$RINGLAB_CACHE`, else `$HOME/.cache/ringlab/cache.json`.
pub fn default_cache_path() -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return Some(PathBuf::from(p));
    }
    std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache/ringlab/cache.json"))
}

impl ResultCache {
    pub fn disabled() -> Self {
        ResultCache::default()
    }

    /// Opens the cache at `path`. A missing or unreadable file yields an
    /// empty cache; entries from other tool versions are dropped.
    pub fn open(path: PathBuf) -> Self {
        let prefix = format!("{TOOL_VERSION}|");
        let entries = std::fs::read_to_string(&path)
            .ok()
            .and_then(|t| serde_json::from_str::<CacheFile>(&t).ok())
            .map(|f| {
                f.entries
                    .into_iter()
                    .filter(|(k, _)| k.starts_with(&prefix))
                    .collect()
            })
            .unwrap_or_default();
        ResultCache {
            path: Some(path),
            entries,
            dirty: false,
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.path.is_some()
    }

    pub fn key(spec: &str, operation: &str) -> String {
        format!("{TOOL_VERSION}|{spec}|{operation}")
    }

    pub fn get<T: DeserializeOwned>(&self, spec: &str, operation: &str) -> Option<T> {
        if !self.is_enabled() {
            return None;
        }
        let v = self.entries.get(&Self::key(spec, operation))?;
        serde_json::from_value(v.clone()).ok()
    }

    pub fn put<T: Serialize>(&mut self, spec: &str, operation: &str, value: &T) -> Result<()> {
        if self.is_enabled() {
            self.entries
                .insert(Self::key(spec, operation), serde_json::to_value(value)?);
            self.dirty = true;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes to a temporary file beside the target and renames it into
    /// place.
    pub fn save(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        let file = CacheFile {
            entries: std::mem::take(&mut self.entries),
        };
        let written = serde_json::to_writer(&mut tmp, &file);
        self.entries = file.entries;
        written?;
        tmp.flush()?;
        tmp.persist(path).map_err(|e| e.error)?;
        self.dirty = false;
        Ok(())
    }
}
