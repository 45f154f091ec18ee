//! Interestingness-first feature ranking and interpretable classifiers.
//!
//! The pipeline: an oracle (an LLM judge, or a seeded mock driven by a
//! preference matrix) answers pairwise "which feature would make the more
//! interesting prediction rule?" queries. Borda counting over those votes
//! yields a global interestingness ranking. Logistic classifiers restricted
//! to the top-K ranked features are then swept over K until the model is
//! both above the chance rate and significant under a likelihood-ratio test;
//! the smallest such K is reported. Accuracy-first baselines (group LASSO,
//! logistic weight norms, validation selection) run alongside for contrast.
//!
//! Modules map onto pipeline stages:
//!
//! * [`data`] — CSV ingestion, schema inference, preprocessing, splits
//! * [`judge`] — pairwise oracles (live HTTP, seeded mock), caching
//! * [`ranking`] — Borda estimation, active ranking, rank metrics, harnesses
//! * [`glm`] — logistic regression (IRLS), group LASSO, likelihood-ratio tests
//! * [`selection`] — the top-K interestingness sweep and baseline rankers
//!
//! With the default `parallel` feature, independent inner loops (Monte Carlo
//! comparisons, per-K fits, repeated experiment runs) execute on rayon;
//! without it everything runs sequentially. Results are identical either way.

pub mod data;
pub mod glm;
pub mod judge;
pub mod parallel;
pub mod ranking;
pub mod selection;

mod seeding;
