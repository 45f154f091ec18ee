//! Monte Carlo Borda counting and its analytic counterpart.

use super::{BordaEstimate, ComparisonRecord, RankTask, RankingError};
use crate::judge::{FeatureRef, Judge, PreferenceMatrix, Winner};
use crate::parallel;
use crate::seeding::mix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A Borda estimate together with the full comparison transcript.
#[derive(Debug, Clone)]
pub struct BordaOutcome {
    pub estimate: BordaEstimate,
    pub transcript: Vec<ComparisonRecord>,
}

/// Estimates Borda scores by sampling `n_comparisons` unordered pairs
/// uniformly with replacement and counting the oracle's votes.
///
/// Each feature's score is its votes divided by the number of comparisons it
/// appeared in (never-sampled features score 0), which estimates the average
/// win probability against a uniformly random opponent. Oracle queries are
/// evaluated in parallel when the `parallel` feature is on; vote counting is
/// commutative, and mock draws are keyed per sample, so results do not
/// depend on evaluation order.
pub fn borda_count<J: Judge + ?Sized>(
    features: &[FeatureRef],
    judge: &J,
    task: &RankTask,
    n_comparisons: u64,
    seed: u64,
) -> Result<BordaOutcome, RankingError> {
    let m = features.len();
    if m < 2 {
        return Err(RankingError::TooFewFeatures(m));
    }
    if n_comparisons == 0 {
        return Err(RankingError::InvalidParameter(
            "need at least one comparison".into(),
        ));
    }

    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, 0xb0_4da]));
    let sampled: Vec<(usize, usize)> = (0..n_comparisons)
        .map(|_| pairs[rng.gen_range(0..pairs.len())])
        .collect();

    let results = parallel::map_indexed(sampled.len(), |k| {
        let (i, j) = sampled[k];
        let query = task.pair_query(&features[i], &features[j]);
        // The draw index is mixed with the seed so different runs over the
        // same features use disjoint mock randomness.
        judge.compare(&query, mix(&[seed, k as u64]))
    });

    let mut votes = vec![0u64; m];
    let mut appearances = vec![0u64; m];
    let mut transcript = Vec::with_capacity(sampled.len());
    let mut failure = None;
    for (k, result) in results.into_iter().enumerate() {
        let (i, j) = sampled[k];
        match result {
            Ok(outcome) => {
                appearances[i] += 1;
                appearances[j] += 1;
                let winner = match outcome.winner {
                    Winner::A => i,
                    Winner::B => j,
                };
                votes[winner] += 1;
                transcript.push(ComparisonRecord {
                    draw: k as u64,
                    feature_a: features[i].name.clone(),
                    feature_b: features[j].name.clone(),
                    winner: features[winner].name.clone(),
                    source: outcome.source,
                    latency_ms: outcome.latency_ms,
                });
            }
            Err(e) => {
                failure.get_or_insert(e);
            }
        }
    }
    if let Some(source) = failure {
        return Err(RankingError::OracleFailure {
            partial_transcript: transcript,
            source,
        });
    }

    let scores = votes
        .iter()
        .zip(&appearances)
        .map(|(&v, &a)| if a == 0 { 0.0 } else { v as f64 / a as f64 })
        .collect();
    Ok(BordaOutcome {
        estimate: BordaEstimate {
            names: features.iter().map(|f| f.name.clone()).collect(),
            scores,
            votes,
            appearances,
            comparisons_used: n_comparisons,
        },
        transcript,
    })
}

/// Exact Borda scores from a preference matrix:
/// `score_i = (1 / (m - 1)) * sum_{j != i} p[i][j]`.
pub fn analytic_borda(matrix: &PreferenceMatrix) -> Result<BordaEstimate, RankingError> {
    matrix
        .validate()
        .map_err(|e| RankingError::InvalidParameter(e.to_string()))?;
    let m = matrix.len();
    let scores = (0..m)
        .map(|i| {
            let total: f64 = (0..m).filter(|&j| j != i).map(|j| matrix.p[i][j]).sum();
            total / (m as f64 - 1.0)
        })
        .collect();
    Ok(BordaEstimate {
        names: matrix.names.clone(),
        scores,
        votes: vec![0; m],
        appearances: vec![0; m],
        comparisons_used: 0,
    })
}
