//! Interpretable model core: L2 logistic regression fitted by IRLS, group
//! LASSO via proximal gradient, log-likelihoods, chi-square tails, and
//! likelihood-ratio tests with Bonferroni correction.

mod chi2;
mod group_lasso;
mod logistic;
mod lrtest;

pub use chi2::{chi_square_sf, ln_gamma};
pub use group_lasso::{
    default_lambda_grid, fit_group_lasso, group_lasso_path, lambda_max, GroupLassoFit, LassoPath,
};
pub use logistic::{
    accuracy, fit_logistic, fit_logistic_traced, fit_null, log_likelihood, predict_proba, FitTrace,
};
pub use lrtest::{bonferroni, lr_test};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GlmError {
    #[error("labels must be binary 0/1")]
    NonBinaryLabels,
    #[error("non-finite value encountered in {0}")]
    NonFiniteInput(&'static str),
    #[error("design matrix has {actual} columns, model expects {expected}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("degrees of freedom must be >= 1, got {0}")]
    InvalidDegreesOfFreedom(u32),
    #[error("penalty weight must be >= 0, got {0}")]
    NegativePenalty(f64),
    #[error("groups do not partition the design-matrix columns")]
    InvalidGroups,
    #[error("normal equations could not be solved (singular system)")]
    SingularSystem,
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
}

/// A fitted logistic model: intercept plus one weight per design column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogisticModel {
    pub intercept: f64,
    pub weights: Vec<f64>,
    pub column_labels: Vec<String>,
    #[serde(rename = "lambda")]
    pub l2_lambda: f64,
    pub converged: bool,
    pub gradient_norm: f64,
}

impl LogisticModel {
    /// Linear predictor for one row.
    pub(crate) fn linear(&self, row: ndarray::ArrayView1<'_, f64>) -> f64 {
        debug_assert_eq!(row.len(), self.weights.len());
        let mut z = self.intercept;
        for (x, w) in row.iter().zip(&self.weights) {
            z += x * w;
        }
        z
    }

    /// Euclidean norm of the weights in a column range.
    pub fn group_norm(&self, columns: std::ops::Range<usize>) -> f64 {
        self.weights[columns]
            .iter()
            .map(|w| w * w)
            .sum::<f64>()
            .sqrt()
    }

    /// Human-readable one-line-per-column rule summary:
    /// `higher <column> -> <class>` by the sign of each weight.
    pub fn rule_summary(&self, positive_class: &str, negative_class: &str) -> String {
        let mut lines = Vec::with_capacity(self.weights.len() + 1);
        lines.push(format!("intercept {:+.4}", self.intercept));
        for (label, w) in self.column_labels.iter().zip(&self.weights) {
            let class = if *w >= 0.0 {
                positive_class
            } else {
                negative_class
            };
            lines.push(format!("{:+.4} {} -> {}", w, label, class));
        }
        lines.join("\n")
    }
}

/// Outcome of a likelihood-ratio test against an intercept-only null.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TestResult {
    /// 2 * (LL_full - LL_null), floored at zero.
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    pub alpha: f64,
    pub m_tests: usize,
    pub significant_after_bonferroni: bool,
}
