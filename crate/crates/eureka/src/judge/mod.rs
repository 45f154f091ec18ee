//! Pairwise interestingness oracles.
//!
//! A [`Judge`] answers one question: given two candidate features, which
//! would make the more interesting prediction rule for the task at hand?
//! [`LiveJudge`] asks a chat-completion endpoint over HTTP; [`MockJudge`]
//! draws seeded Bernoulli outcomes from a [`PreferenceMatrix`], which makes
//! every experiment in this crate reproducible offline. [`CachedJudge`]
//! wraps another judge with a persistent append-only transcript so
//! interrupted live runs resume without re-querying.

mod cache;
mod live;
mod mock;

pub use cache::{cache_key, CachedJudge, ComparisonCache};
pub use live::{LiveJudge, LiveJudgeConfig, PROMPT_TEMPLATE_VERSION};
pub use mock::MockJudge;

use crate::seeding::{mix, unit_f64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JudgeError {
    #[error("invalid comparison query: {0}")]
    InvalidQuery(String),
    #[error("feature {0:?} is not covered by the preference matrix")]
    UnknownFeature(String),
    #[error("invalid preference matrix: {0}")]
    InvalidPreferenceMatrix(String),
    #[error("transport failure after {attempts} attempts: {message}")]
    Transport { attempts: u32, message: String },
    #[error(
        "could not parse a winner from the reply after {attempts} attempts; last reply: {raw:?}"
    )]
    UnparseableReply { attempts: u32, raw: String },
    #[error("reply does not contain each feature exactly once: {detail}; last reply: {raw:?}")]
    IncompleteRanking { detail: String, raw: String },
    #[error("cache file corrupt at line {line}: {message}")]
    CorruptCache { line: usize, message: String },
    #[error("cache I/O error: {0}")]
    CacheIo(#[from] std::io::Error),
}

/// A feature as shown to the judge: name plus optional description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

impl FeatureRef {
    pub fn named(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            description: None,
        }
    }
}

/// One pairwise interestingness question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonQuery {
    pub task_description: String,
    pub label_name: String,
    pub feature_a: FeatureRef,
    pub feature_b: FeatureRef,
}

impl ComparisonQuery {
    pub fn validate(&self) -> Result<(), JudgeError> {
        if self.task_description.is_empty() || self.label_name.is_empty() {
            return Err(JudgeError::InvalidQuery(
                "task description and label name must be non-empty".into(),
            ));
        }
        if self.feature_a.name.is_empty() || self.feature_b.name.is_empty() {
            return Err(JudgeError::InvalidQuery(
                "feature names must be non-empty".into(),
            ));
        }
        if self.feature_a.name == self.feature_b.name {
            return Err(JudgeError::InvalidQuery(format!(
                "cannot compare feature {:?} with itself",
                self.feature_a.name
            )));
        }
        Ok(())
    }

    /// The same query with the two features swapped.
    pub fn swapped(&self) -> ComparisonQuery {
        ComparisonQuery {
            task_description: self.task_description.clone(),
            label_name: self.label_name.clone(),
            feature_a: self.feature_b.clone(),
            feature_b: self.feature_a.clone(),
        }
    }
}

/// A full-ranking request for the direct (single-prompt) variant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectRankQuery {
    pub task_description: String,
    pub label_name: String,
    pub features: Vec<FeatureRef>,
}

impl DirectRankQuery {
    pub fn validate(&self) -> Result<(), JudgeError> {
        if self.features.len() < 2 {
            return Err(JudgeError::InvalidQuery(
                "direct ranking needs at least two features".into(),
            ));
        }
        Ok(())
    }
}

/// Which side of a comparison won. There are no ties: the judge is forced to
/// choose.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    A,
    B,
}

/// Where a comparison outcome came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Live,
    Mock,
    Cache,
}

/// Outcome of one comparison.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub winner: Winner,
    pub raw_response: String,
    pub source: Source,
    pub latency_ms: u64,
}

/// A pairwise interestingness oracle.
///
/// `draw` distinguishes repeated evaluations of the same pair: the mock
/// judge keys its Bernoulli draw on it, so results are deterministic under
/// any evaluation order, including concurrent execution.
pub trait Judge: Send + Sync {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError>;

    /// Produces a full feature ordering (most interesting first) from a
    /// single prompt.
    fn direct_rank(&self, query: &DirectRankQuery, draw: u64) -> Result<Vec<String>, JudgeError>;
}

impl<J: Judge + ?Sized> Judge for &J {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError> {
        (**self).compare(query, draw)
    }

    fn direct_rank(&self, query: &DirectRankQuery, draw: u64) -> Result<Vec<String>, JudgeError> {
        (**self).direct_rank(query, draw)
    }
}

impl<J: Judge + ?Sized> Judge for Box<J> {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError> {
        (**self).compare(query, draw)
    }

    fn direct_rank(&self, query: &DirectRankQuery, draw: u64) -> Result<Vec<String>, JudgeError> {
        (**self).direct_rank(query, draw)
    }
}

/// Ground-truth win probabilities for the mock judge: `p[i][j]` is the
/// probability that feature `i` beats feature `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreferenceMatrix {
    pub names: Vec<String>,
    pub p: Vec<Vec<f64>>,
}

impl PreferenceMatrix {
    pub fn new(names: Vec<String>, p: Vec<Vec<f64>>) -> Result<Self, JudgeError> {
        let matrix = Self { names, p };
        matrix.validate()?;
        Ok(matrix)
    }

    /// A deterministic matrix from a dominance order: earlier names beat
    /// later names with probability 1.
    pub fn from_dominance(names: Vec<String>) -> Result<Self, JudgeError> {
        let m = names.len();
        let p = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        use std::cmp::Ordering::*;
                        match i.cmp(&j) {
                            Less => 1.0,
                            Equal => 0.5,
                            Greater => 0.0,
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(names, p)
    }

    pub fn validate(&self) -> Result<(), JudgeError> {
        let m = self.names.len();
        if m < 2 {
            return Err(JudgeError::InvalidPreferenceMatrix(
                "need at least two features".into(),
            ));
        }
        if self.p.len() != m || self.p.iter().any(|row| row.len() != m) {
            return Err(JudgeError::InvalidPreferenceMatrix(format!(
                "matrix must be {m}x{m}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for name in &self.names {
            if !seen.insert(name.as_str()) {
                return Err(JudgeError::InvalidPreferenceMatrix(format!(
                    "duplicate name {name:?}"
                )));
            }
        }
        for i in 0..m {
            for j in 0..m {
                let v = self.p[i][j];
                if !(0.0..=1.0).contains(&v) {
                    return Err(JudgeError::InvalidPreferenceMatrix(format!(
                        "p[{i}][{j}] = {v} outside [0, 1]"
                    )));
                }
                if i != j && (self.p[i][j] + self.p[j][i] - 1.0).abs() > 1e-9 {
                    return Err(JudgeError::InvalidPreferenceMatrix(format!(
                        "p[{i}][{j}] + p[{j}][{i}] != 1"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self, JudgeError> {
        let text = std::fs::read_to_string(path)?;
        let matrix: PreferenceMatrix = serde_json::from_str(&text)
            .map_err(|e| JudgeError::InvalidPreferenceMatrix(e.to_string()))?;
        matrix.validate()?;
        Ok(matrix)
    }
}

/// Queries both presentation orders and resolves disagreements with a fair
/// seeded coin flip. Pair order is otherwise never symmetrized.
pub struct SymmetrizingJudge<J> {
    inner: J,
    seed: u64,
}

impl<J: Judge> SymmetrizingJudge<J> {
    pub fn new(inner: J, seed: u64) -> Self {
        Self { inner, seed }
    }
}

impl<J: Judge> Judge for SymmetrizingJudge<J> {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError> {
        let forward = self.inner.compare(query, draw.wrapping_mul(2))?;
        let reversed = self
            .inner
            .compare(&query.swapped(), draw.wrapping_mul(2).wrapping_add(1))?;
        // In the reversed presentation, a "B" vote is a vote for the
        // original feature A.
        let winner = match (forward.winner, reversed.winner) {
            (Winner::A, Winner::B) => Winner::A,
            (Winner::B, Winner::A) => Winner::B,
            _ => {
                let u = unit_f64(mix(&[
                    self.seed,
                    hash_name(&query.feature_a.name),
                    hash_name(&query.feature_b.name),
                    draw,
                ]));
                if u < 0.5 {
                    Winner::A
                } else {
                    Winner::B
                }
            }
        };
        Ok(ComparisonResult {
            winner,
            raw_response: format!(
                "forward: {:?} ({}); reversed: {:?} ({})",
                forward.winner, forward.raw_response, reversed.winner, reversed.raw_response
            ),
            source: forward.source,
            latency_ms: forward.latency_ms + reversed.latency_ms,
        })
    }

    fn direct_rank(&self, query: &DirectRankQuery, draw: u64) -> Result<Vec<String>, JudgeError> {
        self.inner.direct_rank(query, draw)
    }
}

/// FNV-1a over the name bytes; stable across platforms and releases.
fn hash_name(name: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}
