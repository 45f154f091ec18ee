//! Active ranking by successive elimination on Borda-score confidence
//! intervals.

use super::borda::BordaOutcome;
use super::{BordaEstimate, ComparisonRecord, RankTask, RankingError};
use crate::judge::{FeatureRef, Judge, Winner};
use crate::seeding::mix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Confidence radius after `t` comparisons of one item:
/// `sqrt(log(4 m t^2 / delta) / (2 t))`.
pub fn confidence_radius(t: u64, m: usize, delta: f64) -> f64 {
    let t = t as f64;
    ((4.0 * m as f64 * t * t / delta).ln() / (2.0 * t)).sqrt()
}

/// Round-based active Borda estimation.
///
/// Every round, each still-active item is compared against one uniformly
/// random opponent (drawn from all items). An item freezes once its
/// confidence interval separates from every other item's, pinning its rank;
/// frozen items stop receiving comparisons but keep serving as opponents.
/// Stops at full separation or when the budget is exhausted.
pub fn active_rank<J: Judge + ?Sized>(
    features: &[FeatureRef],
    judge: &J,
    task: &RankTask,
    budget: u64,
    delta: f64,
    seed: u64,
) -> Result<BordaOutcome, RankingError> {
    let m = features.len();
    if m < 2 {
        return Err(RankingError::TooFewFeatures(m));
    }
    if budget < m as u64 {
        return Err(RankingError::BudgetTooSmall {
            budget,
            minimum: m as u64,
        });
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(RankingError::InvalidParameter(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(mix(&[seed, 0xac_71f3]));
    let mut wins = vec![0u64; m];
    let mut plays = vec![0u64; m];
    let mut active = vec![true; m];
    let mut used = 0u64;
    let mut transcript = Vec::new();

    while used < budget && active.iter().any(|&a| a) {
        // One comparison per active item, in index order, while budget lasts.
        for i in 0..m {
            if !active[i] || used >= budget {
                continue;
            }
            let mut opponent = rng.gen_range(0..m - 1);
            if opponent >= i {
                opponent += 1;
            }
            let query = task.pair_query(&features[i], &features[opponent]);
            let outcome = judge
                .compare(&query, mix(&[seed, used]))
                .map_err(|source| RankingError::OracleFailure {
                    partial_transcript: transcript.clone(),
                    source,
                })?;
            plays[i] += 1;
            if outcome.winner == Winner::A {
                wins[i] += 1;
            }
            transcript.push(ComparisonRecord {
                draw: used,
                feature_a: features[i].name.clone(),
                feature_b: features[opponent].name.clone(),
                winner: match outcome.winner {
                    Winner::A => features[i].name.clone(),
                    Winner::B => features[opponent].name.clone(),
                },
                source: outcome.source,
                latency_ms: outcome.latency_ms,
            });
            used += 1;
        }

        // Freeze items whose intervals separate from all competitors.
        let estimate: Vec<f64> = wins
            .iter()
            .zip(&plays)
            .map(|(&w, &t)| if t == 0 { 0.0 } else { w as f64 / t as f64 })
            .collect();
        let radius: Vec<f64> = plays
            .iter()
            .map(|&t| {
                if t == 0 {
                    f64::INFINITY
                } else {
                    confidence_radius(t, m, delta)
                }
            })
            .collect();
        for i in 0..m {
            if !active[i] {
                continue;
            }
            let separated =
                (0..m).all(|j| j == i || (estimate[i] - estimate[j]).abs() > radius[i] + radius[j]);
            if separated {
                active[i] = false;
            }
        }
    }

    let scores = wins
        .iter()
        .zip(&plays)
        .map(|(&w, &t)| if t == 0 { 0.0 } else { w as f64 / t as f64 })
        .collect();
    Ok(BordaOutcome {
        estimate: BordaEstimate {
            names: features.iter().map(|f| f.name.clone()).collect(),
            scores,
            votes: wins,
            appearances: plays,
            comparisons_used: used,
        },
        transcript,
    })
}
