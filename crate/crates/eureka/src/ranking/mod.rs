//! Borda-score estimation from pairwise comparisons, rank metrics, and the
//! experiment harnesses built on them.
//!
//! [`borda_count`] is the workhorse: sample pairs uniformly with
//! replacement, ask the oracle, count votes. [`active_rank`] is the
//! confidence-bound alternative that freezes items once their intervals
//! separate. [`analytic_borda`] evaluates the underlying score directly from
//! a preference matrix and serves as ground truth for benchmarks.

mod active;
mod borda;
mod experiments;
mod metrics;

pub use active::{active_rank, confidence_radius};
pub use borda::{analytic_borda, borda_count, BordaOutcome};
pub use experiments::{
    rankbench, stability_experiment, RankBenchReport, RankMethod, StabilityReport, SummaryStat,
    TruthSpec,
};
pub use metrics::{kendall_tau, mae, spearman_rho};

use crate::judge::{ComparisonQuery, FeatureRef, JudgeError, Source};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RankingError {
    #[error("need at least two features, got {0}")]
    TooFewFeatures(usize),
    #[error("comparison budget must be at least {minimum}, got {budget}")]
    BudgetTooSmall { budget: u64, minimum: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("rankings cover different feature sets")]
    MismatchedFeatureSets,
    #[error("oracle failed after {} completed comparisons: {source}", partial_transcript.len())]
    OracleFailure {
        partial_transcript: Vec<ComparisonRecord>,
        #[source]
        source: JudgeError,
    },
    #[error("{failures} of {runs} ranking runs failed; need at least two successes")]
    TooManyFailures { failures: u32, runs: u32 },
}

/// What the ranking is about: shown verbatim to judges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTask {
    pub description: String,
    pub label_name: String,
}

impl RankTask {
    pub fn new(description: impl Into<String>, label_name: impl Into<String>) -> Self {
        Self {
            description: description.into(),
            label_name: label_name.into(),
        }
    }

    pub(crate) fn pair_query(&self, a: &FeatureRef, b: &FeatureRef) -> ComparisonQuery {
        ComparisonQuery {
            task_description: self.description.clone(),
            label_name: self.label_name.clone(),
            feature_a: a.clone(),
            feature_b: b.clone(),
        }
    }
}

/// One completed comparison, for transcripts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRecord {
    pub draw: u64,
    pub feature_a: String,
    pub feature_b: String,
    pub winner: String,
    pub source: Source,
    pub latency_ms: u64,
}

/// Estimated Borda scores: per feature, the fraction of its comparisons it
/// won (an estimate of its average win probability over opponents).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BordaEstimate {
    pub names: Vec<String>,
    /// Scores in [0, 1]; features never sampled score 0.
    pub scores: Vec<f64>,
    pub votes: Vec<u64>,
    /// Comparisons each feature appeared in.
    pub appearances: Vec<u64>,
    /// Total oracle calls consumed.
    pub comparisons_used: u64,
}

impl BordaEstimate {
    /// Induced ranking: descending score, ties broken by feature index.
    pub fn ranking(&self) -> Ranking {
        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by(|&a, &b| {
            self.scores[b]
                .partial_cmp(&self.scores[a])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });

        let mut tie_groups: Vec<Vec<String>> = Vec::new();
        let mut idx = 0;
        while idx < order.len() {
            let mut end = idx + 1;
            while end < order.len() && self.scores[order[end]] == self.scores[order[idx]] {
                end += 1;
            }
            if end - idx > 1 {
                tie_groups.push(
                    order[idx..end]
                        .iter()
                        .map(|&i| self.names[i].clone())
                        .collect(),
                );
            }
            idx = end;
        }

        Ranking {
            order: order.into_iter().map(|i| self.names[i].clone()).collect(),
            tie_groups,
        }
    }

    pub fn score_of(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.scores[i])
    }
}

/// An ordered list of feature names, most interesting first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranking {
    pub order: Vec<String>,
    /// Groups of features whose estimated scores were exactly equal; their
    /// relative order is the tie-break, not a judgment.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tie_groups: Vec<Vec<String>>,
}

impl Ranking {
    pub fn new(order: Vec<String>) -> Self {
        Self {
            order,
            tie_groups: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Rank position per feature (0 = most interesting).
    pub fn positions(&self) -> std::collections::HashMap<&str, usize> {
        self.order
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect()
    }

    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self, std::io::Error> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}
