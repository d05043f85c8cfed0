//! On-disk census cache keyed by `(engine version, n, class)`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use asm_census_core::report::{CensusDocument, ENGINE_VERSION};
use asm_census_core::{CensusRecord, SymmetryClass};
use serde::{Deserialize, Serialize};

#[derive(Debug, Default, Serialize, Deserialize)]
struct CacheFile {
    entries: BTreeMap<String, CensusDocument>,
}

pub struct Cache {
    path: Option<PathBuf>,
    file: CacheFile,
    dirty: bool,
}

fn key(n: usize, class: SymmetryClass) -> String {
    format!("{ENGINE_VERSION}|{n}|{}", class.tag())
}

impl Cache {
    /// A cache that never hits and never writes.
    pub fn disabled() -> Self {
        Cache {
            path: None,
            file: CacheFile::default(),
            dirty: false,
        }
    }

    /// Loads `path`; an unreadable or malformed file starts an empty cache.
    pub fn open(path: &Path) -> Self {
        let file = match fs::read_to_string(path) {
            Ok(text) => serde_json::from_str(&text).unwrap_or_else(|e| {
                eprintln!("warning: ignoring unreadable cache {}: {e}", path.display());
                CacheFile::default()
            }),
            Err(_) => CacheFile::default(),
        };
        Cache {
            path: Some(path.to_owned()),
            file,
            dirty: false,
        }
    }

    pub fn get(&self, n: usize, class: SymmetryClass) -> Option<CensusRecord> {
        self.path.as_ref()?;
        let doc = self.file.entries.get(&key(n, class))?;
        if doc.engine_version != ENGINE_VERSION {
            return None;
        }
        CensusRecord::try_from(doc).ok()
    }

    pub fn put(&mut self, record: &CensusRecord) {
        if self.path.is_none() {
            return;
        }
        self.file
            .entries
            .insert(key(record.n, record.class), CensusDocument::from(record));
        self.dirty = true;
    }

    pub fn save(&mut self) -> anyhow::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        if !self.dirty {
            return Ok(());
        }
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(&self.file)?;
        fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("replacing {}", path.display()))?;
        self.dirty = false;
        Ok(())
    }
}
