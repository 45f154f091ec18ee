//! Seeded mock judge driven by a preference matrix.

use super::{
    ComparisonQuery, ComparisonResult, DirectRankQuery, Judge, JudgeError, PreferenceMatrix,
    Source, Winner,
};
use crate::seeding::{mix, unit_f64};

/// Offline oracle: the winner of pair `(a, b)` on draw `k` is a Bernoulli
/// sample with success probability `p[a][b]`, keyed on
/// `(seed, a, b, k)`. Identical keys reproduce identical outcomes, so
/// comparisons may run concurrently in any order.
pub struct MockJudge {
    matrix: PreferenceMatrix,
    seed: u64,
    /// Direct-ranking noise: each adjacent pair of the analytic order is
    /// swapped with this probability in one left-to-right pass.
    swap_probability: f64,
}

impl MockJudge {
    pub fn new(matrix: PreferenceMatrix, seed: u64) -> Self {
        Self {
            matrix,
            seed,
            swap_probability: 0.0,
        }
    }

    /// Sets the direct-ranking adjacent-swap probability.
    pub fn with_swap_probability(mut self, eta: f64) -> Self {
        self.swap_probability = eta.clamp(0.0, 1.0);
        self
    }

    pub fn matrix(&self) -> &PreferenceMatrix {
        &self.matrix
    }

    fn index_of(&self, name: &str) -> Result<usize, JudgeError> {
        self.matrix
            .index(name)
            .ok_or_else(|| JudgeError::UnknownFeature(name.to_owned()))
    }
}

impl Judge for MockJudge {
    fn compare(&self, query: &ComparisonQuery, draw: u64) -> Result<ComparisonResult, JudgeError> {
        query.validate()?;
        let a = self.index_of(&query.feature_a.name)?;
        let b = self.index_of(&query.feature_b.name)?;
        let p_a_wins = self.matrix.p[a][b];
        let u = unit_f64(mix(&[self.seed, a as u64, b as u64, draw]));
        let winner = if u < p_a_wins { Winner::A } else { Winner::B };
        Ok(ComparisonResult {
            winner,
            raw_response: format!("mock p={p_a_wins} u={u:.6}"),
            source: Source::Mock,
            latency_ms: 0,
        })
    }

    fn direct_rank(&self, query: &DirectRankQuery, draw: u64) -> Result<Vec<String>, JudgeError> {
        query.validate()?;
        let indices: Vec<usize> = query
            .features
            .iter()
            .map(|f| self.index_of(&f.name))
            .collect::<Result<_, _>>()?;

        // Analytic Borda scores restricted to the queried subset.
        let m = indices.len();
        let mut scored: Vec<(usize, f64)> = indices
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let total: f64 = indices
                    .iter()
                    .filter(|&&j| j != i)
                    .map(|&j| self.matrix.p[i][j])
                    .sum();
                (pos, total / (m as f64 - 1.0))
            })
            .collect();
        scored.sort_by(|(pa, sa), (pb, sb)| sb.partial_cmp(sa).unwrap().then(pa.cmp(pb)));
        let mut order: Vec<String> = scored
            .into_iter()
            .map(|(pos, _)| query.features[pos].name.clone())
            .collect();

        // One noise pass: swap each adjacent pair with the configured
        // probability, seeded on (seed, draw, position).
        if self.swap_probability > 0.0 {
            for pos in 0..order.len().saturating_sub(1) {
                let u = unit_f64(mix(&[self.seed, swap_sentinel(), draw, pos as u64]));
                if u < self.swap_probability {
                    order.swap(pos, pos + 1);
                }
            }
        }
        Ok(order)
    }
}

const fn swap_sentinel() -> u64 {
    0x7261_6e6b // distinguishes direct-rank draws from compare draws
}
