//! Interestingness-first feature selection and accuracy-first baselines.
//!
//! [`eureka_sweep`] walks the interestingness ranking: for each K it fits a
//! logistic classifier restricted to the top-K features and records test
//! accuracy plus a likelihood-ratio test against the intercept-only null.
//! The reported K' is the smallest K whose classifier is both above the
//! test-set chance rate and Bonferroni-significant. The three baselines
//! ([`rank_by_group_lasso`], [`rank_by_lr_weights`], [`rank_by_validation`])
//! order features by predictive strength instead and exist for contrast.

mod baselines;
mod sweep;

pub use baselines::{rank_by_group_lasso, rank_by_lr_weights, rank_by_validation};
pub use sweep::{eureka_sweep, eureka_sweep_with, SweepConfig};

use crate::data::DataError;
use crate::glm::GlmError;
use crate::ranking::Ranking;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SelectionError {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Glm(#[from] GlmError),
    #[error("ranking is empty")]
    EmptyRanking,
    #[error("k_max {k_max} exceeds the number of features {d}")]
    KMaxTooLarge { k_max: usize, d: usize },
    #[error("ranking does not cover the design-matrix features: {0}")]
    RankingMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Accuracy of always predicting the majority class.
pub fn chance_rate(labels: &[u8]) -> f64 {
    if labels.is_empty() {
        return 0.0;
    }
    let ones = labels.iter().filter(|&&y| y == 1).count();
    let majority = ones.max(labels.len() - ones);
    majority as f64 / labels.len() as f64
}

/// One row of the K sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSweepRecord {
    pub k: usize,
    /// The top-K feature set, in ranking order.
    pub features: Vec<String>,
    /// The feature that entered at this K.
    pub feature_added: String,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub lr_statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// Full sweep output: per-K records, the chance rate, and the selected K'.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KSweepReport {
    pub ranking: Ranking,
    pub records: Vec<KSweepRecord>,
    pub chance_rate: f64,
    /// Smallest K that is both above chance and significant; absent when no
    /// K qualifies.
    pub k_prime: Option<usize>,
    pub alpha: f64,
}

impl KSweepReport {
    /// CSV rows `(K, feature_added, test_accuracy, p_value, significant)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,feature_added,test_accuracy,p_value,significant\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.k, r.feature_added, r.test_accuracy, r.p_value, r.significant
            ));
        }
        out
    }
}
