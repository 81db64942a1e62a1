//! Append-only JSONL result cache keyed by a hash of the canonical code.
//!
//! Each line is `{"key": <hex sha256>, "record": <BatchRecord>}`. Later
//! lines win. Lines that fail to parse, or that were written by another
//! engine version, are ignored.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::batch::{BatchRecord, ENGINE_VERSION};

/// Hex SHA-256 of a canonical code cell.
pub fn cache_key(canonical_code: &str) -> String {
    let digest = Sha256::digest(canonical_code.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Serialize, Deserialize)]
struct Line {
    key: String,
    record: BatchRecord,
}

pub struct ResultCache {
    path: PathBuf,
    entries: HashMap<String, BatchRecord>,
    file: File,
}

impl ResultCache {
    /// Opens (creating if needed) the cache file and loads its entries.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let file = OpenOptions::new().create(true).append(true).read(true).open(&path)?;
        let mut entries = HashMap::new();
        for (i, line) in BufReader::new(File::open(&path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<Line>(&line) {
                Ok(l) if l.record.engine_version == ENGINE_VERSION => {
                    entries.insert(l.key, l.record);
                }
                Ok(_) => {}
                Err(e) => log::warn!("{}:{}: skipping corrupt cache line ({e})", path.display(), i + 1),
            }
        }
        Ok(ResultCache { path, entries, file })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Newest record stored under `key`.
    pub fn lookup(&self, key: &str) -> Option<&BatchRecord> {
        self.entries.get(key)
    }

    /// Appends one line with a single write and makes it the current entry.
    pub fn store(&mut self, key: &str, record: &BatchRecord) -> io::Result<()> {
        let line = Line { key: key.to_string(), record: record.clone() };
        let mut text = serde_json::to_string(&line).map_err(io::Error::from)?;
        text.push('\n');
        self.file.write_all(text.as_bytes())?;
        self.file.flush()?;
        self.entries.insert(line.key, line.record);
        Ok(())
    }
}
