//! Record/replay store for provider traffic.
//!
//! A cassette is a JSON-lines file with one record per request, keyed by a
//! SHA-256 hash of (provider, model, full prompt). Any prompt drift changes
//! the key, so replay fails loudly instead of silently mismatching.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::provider::{ProviderResponse, TokenProb};
use crate::error::{Error, Result};

/// One recorded request/response exchange.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CassetteRecord {
    pub key: String,
    pub provider: String,
    pub model: String,
    pub prompt: String,
    pub response_text: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub token_probs: Option<Vec<TokenProb>>,
    /// Unix epoch seconds at record time.
    pub timestamp: u64,
}

impl CassetteRecord {
    pub fn response(&self) -> ProviderResponse {
        ProviderResponse {
            raw_text: self.response_text.clone(),
            token_probs: self.token_probs.clone(),
            meta: serde_json::json!({"replayed": true}),
        }
    }
}

/// An append-only store of recorded exchanges. Reads are concurrent; writes
/// are serialized.
pub struct Cassette {
    path: Option<PathBuf>,
    records: RwLock<HashMap<String, CassetteRecord>>,
    writer: Mutex<Option<std::fs::File>>,
}

impl Cassette {
    /// Derive the lookup key for one prompt.
    pub fn key(provider: &str, model: &str, prompt: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(provider.as_bytes());
        hasher.update([0]);
        hasher.update(model.as_bytes());
        hasher.update([0]);
        hasher.update(prompt.as_bytes());
        hex::encode(hasher.finalize())
    }

    /// A store that never touches the filesystem.
    pub fn in_memory() -> Self {
        Cassette {
            path: None,
            records: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
        }
    }

    /// Load an existing cassette for replay.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(display.clone(), e))?;
        let mut records = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: CassetteRecord =
                serde_json::from_str(line).map_err(|e| Error::Cassette {
                    path: display.clone(),
                    message: format!("line {}: {e}", i + 1),
                })?;
            records.insert(record.key.clone(), record);
        }
        Ok(Cassette {
            path: Some(path.to_path_buf()),
            records: RwLock::new(records),
            writer: Mutex::new(None),
        })
    }

    /// Open (or create) a cassette for recording; existing records are kept
    /// and remain available for lookup.
    pub fn open_for_recording(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let display = path.display().to_string();
        let mut cassette = if path.exists() {
            Cassette::load(path)?
        } else {
            Cassette {
                path: Some(path.to_path_buf()),
                records: RwLock::new(HashMap::new()),
                writer: Mutex::new(None),
            }
        };
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(display, e))?;
        cassette.writer = Mutex::new(Some(file));
        Ok(cassette)
    }

    pub fn get(&self, key: &str) -> Option<CassetteRecord> {
        self.records.read().unwrap().get(key).cloned()
    }

    pub fn contains(&self, key: &str) -> bool {
        self.records.read().unwrap().contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.records.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Insert a record and append it to the backing file, if any.
    pub fn put(&self, record: CassetteRecord) -> Result<()> {
        let line = serde_json::to_string(&record)?;
        {
            let mut writer = self.writer.lock().unwrap();
            if let Some(file) = writer.as_mut() {
                writeln!(file, "{line}").map_err(|e| {
                    Error::io(
                        self.path
                            .as_ref()
                            .map(|p| p.display().to_string())
                            .unwrap_or_default(),
                        e,
                    )
                })?;
            }
        }
        self.records
            .write()
            .unwrap()
            .insert(record.key.clone(), record);
        Ok(())
    }
}

pub(crate) fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
