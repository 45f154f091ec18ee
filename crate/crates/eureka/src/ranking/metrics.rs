//! Rank-correlation and error metrics.
//!
//! Kendall and Spearman are computed as exact integer numerators followed by
//! a single floating-point division, so equal rationals reached by different
//! routes compare bit-identically.

use super::{BordaEstimate, Ranking, RankingError};
use std::collections::HashMap;

type PositionPair<'a> = (HashMap<&'a str, usize>, HashMap<&'a str, usize>);

fn positions_checked<'a>(
    r1: &'a Ranking,
    r2: &'a Ranking,
) -> Result<PositionPair<'a>, RankingError> {
    if r1.len() != r2.len() || r1.is_empty() {
        return Err(RankingError::MismatchedFeatureSets);
    }
    let p1 = r1.positions();
    let p2 = r2.positions();
    if p1.len() != r1.len() || p2.len() != r2.len() {
        return Err(RankingError::MismatchedFeatureSets);
    }
    if !p1.keys().all(|k| p2.contains_key(k)) {
        return Err(RankingError::MismatchedFeatureSets);
    }
    Ok((p1, p2))
}

/// Kendall rank correlation: `(concordant - discordant) / (m (m-1) / 2)`.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<f64, RankingError> {
    let (p1, p2) = positions_checked(r1, r2)?;
    let names: Vec<&str> = r1.order.iter().map(String::as_str).collect();
    let m = names.len();
    if m < 2 {
        return Err(RankingError::TooFewFeatures(m));
    }
    let mut net = 0i64;
    for x in 0..m {
        for y in x + 1..m {
            let a = p1[names[x]] as i64 - p1[names[y]] as i64;
            let b = p2[names[x]] as i64 - p2[names[y]] as i64;
            net += (a * b).signum();
        }
    }
    let pairs = (m * (m - 1) / 2) as f64;
    Ok(net as f64 / pairs)
}

/// Spearman rank correlation: `1 - 6 sum(d^2) / (m (m^2 - 1))`, computed as
/// `(m (m^2 - 1) - 6 sum(d^2)) / (m (m^2 - 1))`.
pub fn spearman_rho(r1: &Ranking, r2: &Ranking) -> Result<f64, RankingError> {
    let (p1, p2) = positions_checked(r1, r2)?;
    let m = r1.len() as i64;
    if m < 2 {
        return Err(RankingError::TooFewFeatures(r1.len()));
    }
    let sum_d2: i64 = r1
        .order
        .iter()
        .map(|n| {
            let d = p1[n.as_str()] as i64 - p2[n.as_str()] as i64;
            d * d
        })
        .sum();
    let denom = m * (m * m - 1);
    Ok((denom - 6 * sum_d2) as f64 / denom as f64)
}

/// Mean absolute error between two score vectors over the same feature set
/// (matched by name).
pub fn mae(estimate: &BordaEstimate, truth: &BordaEstimate) -> Result<f64, RankingError> {
    if estimate.names.len() != truth.names.len() || estimate.names.is_empty() {
        return Err(RankingError::MismatchedFeatureSets);
    }
    let truth_scores: HashMap<&str, f64> = truth
        .names
        .iter()
        .zip(&truth.scores)
        .map(|(n, &s)| (n.as_str(), s))
        .collect();
    let mut total = 0.0;
    for (name, &score) in estimate.names.iter().zip(&estimate.scores) {
        let reference = truth_scores
            .get(name.as_str())
            .ok_or(RankingError::MismatchedFeatureSets)?;
        total += (score - reference).abs();
    }
    Ok(total / estimate.names.len() as f64)
}
