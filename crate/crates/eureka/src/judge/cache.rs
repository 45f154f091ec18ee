//! Persistent comparison cache: an append-only file of JSON lines.

use super::{ComparisonQuery, ComparisonResult, Judge, JudgeError, Source, Winner};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

/// Canonical digest of a comparison: task, label, the ordered pair as
/// presented, the prompt template version, and the model id. The pair order
/// matters, so (A, B) and (B, A) cache independently.
pub fn cache_key(query: &ComparisonQuery, template_version: &str, model_id: &str) -> String {
    let mut hasher = Sha256::new();
    for part in [
        template_version,
        model_id,
        &query.task_description,
        &query.label_name,
        &query.feature_a.name,
        &query.feature_b.name,
    ] {
        hasher.update((part.len() as u64).to_le_bytes());
        hasher.update(part.as_bytes());
    }
    format!("{:x}", hasher.finalize())
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    key: String,
    winner: Winner,
    raw_response: String,
    timestamp: u64,
}

/// On-disk cache of comparison outcomes. Entries are held in memory for
/// lookup; puts append a line and flush, serialized by a mutex.
#[derive(Debug)]
pub struct ComparisonCache {
    path: PathBuf,
    entries: Mutex<HashMap<String, (Winner, String)>>,
    writer: Mutex<File>,
}

impl ComparisonCache {
    /// Opens (or creates) the cache file, loading all existing lines.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, JudgeError> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let parsed: CacheLine =
                    serde_json::from_str(&line).map_err(|e| JudgeError::CorruptCache {
                        line: i + 1,
                        message: e.to_string(),
                    })?;
                entries.insert(parsed.key, (parsed.winner, parsed.raw_response));
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path)?;
        Ok(Self {
            path,
            entries: Mutex::new(entries),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Looks up a stored outcome; hits come back with `source = cache` and
    /// zero latency but the original winner and raw response byte for byte.
    pub fn get(&self, key: &str) -> Option<ComparisonResult> {
        let entries = self.entries.lock().expect("cache poisoned");
        entries.get(key).map(|(winner, raw)| ComparisonResult {
            winner: *winner,
            raw_response: raw.clone(),
            source: Source::Cache,
            latency_ms: 0,
        })
    }

    /// Appends an outcome to the file and the in-memory map.
    pub fn put(&self, key: &str, result: &ComparisonResult) -> Result<(), JudgeError> {
        let line = CacheLine {
            key: key.to_owned(),
            winner: result.winner,
            raw_response: result.raw_response.clone(),
            timestamp: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut serialized = serde_json::to_string(&line).expect("cache line serializes");
        serialized.push('\n');
        {
            let mut writer = self.writer.lock().expect("cache poisoned");
            writer.write_all(serialized.as_bytes())?;
            writer.flush()?;
        }
        self.entries
            .lock()
            .expect("cache poisoned")
            .insert(line.key, (line.winner, line.raw_response));
        Ok(())
    }
}

/// Wraps a judge so comparisons pass through the cache first: hits replay
/// the stored outcome, misses are forwarded and stored. Direct rankings are
/// never cached.
pub struct CachedJudge<J> {
    inner: J,
    cache: ComparisonCache,
    template_version: String,
    model_id: String,
}

impl<J: Judge> CachedJudge<J> {
    pub fn new(
        inner: J,
        cache: ComparisonCache,
        template_version: impl Into<String>,
        model_id: impl Into<String>,
    ) -> Self {
        Self {
            inner,
            cache,
            template_version: template_version.into(),
            model_id: model_id.into(),
        }
    }

    pub fn cache(&self) -> &ComparisonCache {
        &self.cache
    }
}

impl<J: Judge> Judge for CachedJudge<J> {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError> {
        let key = cache_key(query, &self.template_version, &self.model_id);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit);
        }
        let result = self.inner.compare(query, draw)?;
        self.cache.put(&key, &result)?;
        Ok(result)
    }

    fn direct_rank(
        &self,
        query: &super::DirectRankQuery,
        draw: u64,
    ) -> Result<Vec<String>, JudgeError> {
        self.inner.direct_rank(query, draw)
    }
}
