//! Accuracy-first baseline feature rankers.

use super::SelectionError;
use crate::data::{stratified_split_indices, DesignMatrix};
use crate::glm::{accuracy, default_lambda_grid, fit_logistic, group_lasso_path, lambda_max};
use crate::parallel;
use crate::ranking::Ranking;
use ndarray::Array1;

const FIT_TOL: f64 = 1e-8;
const FIT_MAX_ITER: usize = 200;
const LASSO_TOL: f64 = 1e-7;
const LASSO_MAX_ITER: usize = 5000;

/// Ranks features by their entry order on a decreasing group-lasso path.
///
/// `lambda_grid` must be descending; when absent, 32 logarithmic points from
/// `lambda_max` down three decades are used. Features that never enter the
/// support rank last, ordered by the gradient norm of their group at the
/// smallest penalty's solution.
pub fn rank_by_group_lasso(
    train: &DesignMatrix,
    lambda_grid: Option<&[f64]>,
) -> Result<Ranking, SelectionError> {
    let grid = match lambda_grid {
        Some([]) => return Err(SelectionError::InvalidParameter("empty lambda grid".into())),
        Some(g) => g.to_vec(),
        None => default_lambda_grid(lambda_max(train)?),
    };
    let path = group_lasso_path(train, &grid, LASSO_TOL, LASSO_MAX_ITER)?;
    let mut order = path.entry_order(train);

    if order.len() < train.groups.len() {
        // Stragglers: strongest remaining gradient first.
        let last = path.fits.last().expect("non-empty grid");
        let weights = Array1::from_vec(last.model.weights.clone());
        let gradient = loss_gradient(train, last.model.intercept, &weights);
        let entered: std::collections::HashSet<&str> = order.iter().map(String::as_str).collect();
        let mut remaining: Vec<(usize, f64)> = train
            .groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !entered.contains(g.feature.as_str()))
            .map(|(gi, g)| {
                let norm = gradient
                    .slice(ndarray::s![g.columns.clone()])
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt();
                (gi, norm)
            })
            .collect();
        remaining.sort_by(|(ia, na), (ib, nb)| {
            nb.partial_cmp(na)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(ia.cmp(ib))
        });
        order.extend(
            remaining
                .into_iter()
                .map(|(gi, _)| train.groups[gi].feature.clone()),
        );
    }
    Ok(Ranking::new(order))
}

fn loss_gradient(train: &DesignMatrix, intercept: f64, weights: &Array1<f64>) -> Array1<f64> {
    let mut z = train.values.dot(weights);
    z.mapv_inplace(|v| 1.0 / (1.0 + (-(v + intercept)).exp()));
    for (p, &y) in z.iter_mut().zip(&train.labels) {
        *p -= f64::from(y);
    }
    train.values.t().dot(&z)
}

/// Ranks features by the Euclidean norm of their weight block in one
/// L2-regularized logistic fit over all columns. Ties break by feature
/// index.
pub fn rank_by_lr_weights(train: &DesignMatrix, lambda: f64) -> Result<Ranking, SelectionError> {
    let model = fit_logistic(train, lambda, FIT_TOL, FIT_MAX_ITER)?;
    let mut scored: Vec<(usize, f64)> = train
        .groups
        .iter()
        .enumerate()
        .map(|(gi, g)| (gi, model.group_norm(g.columns.clone())))
        .collect();
    scored.sort_by(|(ia, na), (ib, nb)| {
        nb.partial_cmp(na)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(ia.cmp(ib))
    });
    Ok(Ranking::new(
        scored
            .into_iter()
            .map(|(gi, _)| train.groups[gi].feature.clone())
            .collect(),
    ))
}

/// Ranks features by single-feature validation accuracy: the training rows
/// are split stratified by label, one logistic model is fitted per feature
/// on its columns alone, and features order by descending accuracy on the
/// held-out part. Ties break by feature index.
pub fn rank_by_validation(
    train: &DesignMatrix,
    val_fraction: f64,
    seed: u64,
    lambda: f64,
) -> Result<Ranking, SelectionError> {
    let class_ids: Vec<usize> = train.labels.iter().map(|&y| y as usize).collect();
    let (fit_idx, val_idx) = stratified_split_indices(&class_ids, val_fraction, seed)?;

    let accuracies: Vec<Result<f64, SelectionError>> =
        parallel::map_indexed(train.groups.len(), |gi| {
            let name = vec![train.groups[gi].feature.clone()];
            let single = train.select_features(&name)?;
            let fit_part = single.select_rows(&fit_idx);
            let val_part = single.select_rows(&val_idx);
            let model = fit_logistic(&fit_part, lambda, FIT_TOL, FIT_MAX_ITER)?;
            Ok(accuracy(&model, &val_part)?)
        });
    let accuracies: Vec<f64> = accuracies.into_iter().collect::<Result<_, _>>()?;

    let mut scored: Vec<(usize, f64)> = accuracies.into_iter().enumerate().collect();
    scored.sort_by(|(ia, na), (ib, nb)| {
        nb.partial_cmp(na)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(ia.cmp(ib))
    });
    Ok(Ranking::new(
        scored
            .into_iter()
            .map(|(gi, _)| train.groups[gi].feature.clone())
            .collect(),
    ))
}
