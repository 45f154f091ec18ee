//! L2-penalized logistic regression fitted by iteratively reweighted least
//! squares (Newton steps on the penalized log-likelihood, with step halving).

use super::{GlmError, LogisticModel};
use crate::data::DesignMatrix;
use ndarray::{Array1, Array2, ArrayView2};

/// Floor added to the weighted normal equations so degenerate Hessians
/// (separable data, zero-variance columns) stay solvable.
const RIDGE_FLOOR: f64 = 1e-10;

/// Intercept magnitude used for single-class label vectors, where the true
/// optimum is at infinity. sigmoid(40) is 1 within 5e-18.
const DEGENERATE_INTERCEPT: f64 = 40.0;

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// log(sigmoid(z)) computed without overflow.
pub(crate) fn log_sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        -(-z).exp().ln_1p()
    } else {
        z - z.exp().ln_1p()
    }
}

/// Per-iteration diagnostics from an IRLS fit.
#[derive(Debug, Clone)]
pub struct FitTrace {
    /// Penalized objective after each accepted step, starting with the
    /// initial point.
    pub objective: Vec<f64>,
    pub iterations: usize,
}

/// Fits `min NLL(b, w) + (lambda/2) * ||w||^2` (intercept unpenalized).
///
/// Newton/IRLS with step halving; stops when the gradient norm drops to
/// `tol` or after `max_iter` iterations.
pub fn fit_logistic(
    design: &DesignMatrix,
    l2_lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<LogisticModel, GlmError> {
    fit_logistic_traced(design, l2_lambda, tol, max_iter).map(|(m, _)| m)
}

/// As [`fit_logistic`], also returning the objective trace.
pub fn fit_logistic_traced(
    design: &DesignMatrix,
    l2_lambda: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(LogisticModel, FitTrace), GlmError> {
    let y = validate_labels(&design.labels)?;
    let x = design.values.view();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(GlmError::NonFiniteInput("design matrix"));
    }
    if l2_lambda < 0.0 {
        return Err(GlmError::NegativePenalty(l2_lambda));
    }

    let (n, p) = (x.nrows(), x.ncols());
    if n == 0 {
        return Err(GlmError::EmptyInput("design matrix has no rows"));
    }

    let mut intercept = 0.0;
    let mut weights = Array1::<f64>::zeros(p);
    let mut objective = penalized_nll(x, &y, intercept, &weights, l2_lambda);
    let mut trace = FitTrace {
        objective: vec![objective],
        iterations: 0,
    };

    let mut converged = false;
    let mut grad_norm = f64::INFINITY;
    for iter in 0..max_iter {
        trace.iterations = iter;
        let probs = prob_vector(x, intercept, &weights);
        let (grad_b, grad_w) = gradient(x, &y, &probs, &weights, l2_lambda);
        grad_norm = (grad_b * grad_b + grad_w.dot(&grad_w)).sqrt();
        if grad_norm <= tol {
            converged = true;
            break;
        }

        let (dir_b, dir_w) = newton_direction(x, &probs, &grad_b, &grad_w, l2_lambda)?;

        // Step halving: accept the first step that reduces the objective.
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand_b = intercept + step * dir_b;
            let cand_w = &weights + &(step * &dir_w);
            let cand_obj = penalized_nll(x, &y, cand_b, &cand_w, l2_lambda);
            if cand_obj <= objective {
                intercept = cand_b;
                weights = cand_w;
                objective = cand_obj;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        trace.objective.push(objective);
        trace.iterations = iter + 1;
        if !accepted {
            // No descent possible at floating-point resolution.
            break;
        }
    }
    if !converged {
        let probs = prob_vector(x, intercept, &weights);
        let (grad_b, grad_w) = gradient(x, &y, &probs, &weights, l2_lambda);
        grad_norm = (grad_b * grad_b + grad_w.dot(&grad_w)).sqrt();
        converged = grad_norm <= tol;
    }

    let model = LogisticModel {
        intercept,
        weights: weights.to_vec(),
        column_labels: design.column_labels.clone(),
        l2_lambda,
        converged,
        gradient_norm: grad_norm,
    };
    Ok((model, trace))
}

fn validate_labels(labels: &[u8]) -> Result<Vec<f64>, GlmError> {
    if labels.is_empty() {
        return Err(GlmError::EmptyInput("label vector"));
    }
    labels
        .iter()
        .map(|&l| match l {
            0 => Ok(0.0),
            1 => Ok(1.0),
            _ => Err(GlmError::NonBinaryLabels),
        })
        .collect()
}

pub(super) fn prob_vector(
    x: ArrayView2<'_, f64>,
    intercept: f64,
    weights: &Array1<f64>,
) -> Array1<f64> {
    let mut z = x.dot(weights);
    z.mapv_inplace(|v| sigmoid(v + intercept));
    z
}

/// Penalized negative log-likelihood (sum over rows, natural log).
pub(super) fn penalized_nll(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    intercept: f64,
    weights: &Array1<f64>,
    l2_lambda: f64,
) -> f64 {
    let z = x.dot(weights);
    let mut nll = 0.0;
    for (zi, &yi) in z.iter().zip(y) {
        let s = zi + intercept;
        nll -= if yi > 0.5 {
            log_sigmoid(s)
        } else {
            log_sigmoid(-s)
        };
    }
    nll + 0.5 * l2_lambda * weights.dot(weights)
}

pub(super) fn gradient(
    x: ArrayView2<'_, f64>,
    y: &[f64],
    probs: &Array1<f64>,
    weights: &Array1<f64>,
    l2_lambda: f64,
) -> (f64, Array1<f64>) {
    let residual = probs - &Array1::from_iter(y.iter().copied());
    let grad_b = residual.sum();
    let grad_w = x.t().dot(&residual) + &(l2_lambda * weights);
    (grad_b, grad_w)
}

/// Solves the Newton system on the augmented (intercept, weights) space.
fn newton_direction(
    x: ArrayView2<'_, f64>,
    probs: &Array1<f64>,
    grad_b: &f64,
    grad_w: &Array1<f64>,
    l2_lambda: f64,
) -> Result<(f64, Array1<f64>), GlmError> {
    let p = x.ncols();
    let s: Array1<f64> = probs.mapv(|pi| pi * (1.0 - pi));

    // Augmented Hessian: [[sum(s), (X^T s)^T], [X^T s, X^T S X + lambda I]].
    let mut h = Array2::<f64>::zeros((p + 1, p + 1));
    h[[0, 0]] = s.sum();
    let xs = x.t().dot(&s);
    for j in 0..p {
        h[[0, j + 1]] = xs[j];
        h[[j + 1, 0]] = xs[j];
    }
    let weighted = &x * &s.view().insert_axis(ndarray::Axis(1));
    let xtsx = x.t().dot(&weighted);
    for j in 0..p {
        for k in 0..p {
            h[[j + 1, k + 1]] = xtsx[[j, k]];
        }
        h[[j + 1, j + 1]] += l2_lambda;
    }

    let mut rhs = Array1::<f64>::zeros(p + 1);
    rhs[0] = -grad_b;
    for j in 0..p {
        rhs[j + 1] = -grad_w[j];
    }

    let mut ridge = RIDGE_FLOOR;
    for _ in 0..8 {
        let mut sys = h.clone();
        for j in 0..=p {
            sys[[j, j]] += ridge;
        }
        if let Some(sol) = cholesky_solve(&sys, &rhs) {
            let dir_w = Array1::from_iter(sol.iter().skip(1).copied());
            return Ok((sol[0], dir_w));
        }
        ridge *= 100.0;
    }
    Err(GlmError::SingularSystem)
}

/// Cholesky solve for a symmetric positive-definite system; None when the
/// factorization hits a non-positive pivot.
fn cholesky_solve(a: &Array2<f64>, b: &Array1<f64>) -> Option<Array1<f64>> {
    let n = a.nrows();
    let mut l = Array2::<f64>::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[[i, j]];
            for k in 0..j {
                sum -= l[[i, k]] * l[[j, k]];
            }
            if i == j {
                if sum <= 0.0 || !sum.is_finite() {
                    return None;
                }
                l[[i, i]] = sum.sqrt();
            } else {
                l[[i, j]] = sum / l[[j, j]];
            }
        }
    }
    // Forward substitution L z = b, then back substitution L^T x = z.
    let mut z = Array1::<f64>::zeros(n);
    for i in 0..n {
        let mut sum = b[i];
        for k in 0..i {
            sum -= l[[i, k]] * z[k];
        }
        z[i] = sum / l[[i, i]];
    }
    let mut sol = Array1::<f64>::zeros(n);
    for i in (0..n).rev() {
        let mut sum = z[i];
        for k in i + 1..n {
            sum -= l[[k, i]] * sol[k];
        }
        sol[i] = sum / l[[i, i]];
    }
    Some(sol)
}

/// Predicted probabilities of class 1 for every row.
pub fn predict_proba(model: &LogisticModel, design: &DesignMatrix) -> Result<Vec<f64>, GlmError> {
    if design.n_cols() != model.weights.len() {
        return Err(GlmError::DimensionMismatch {
            expected: model.weights.len(),
            actual: design.n_cols(),
        });
    }
    Ok(design
        .values
        .rows()
        .into_iter()
        .map(|row| sigmoid(model.linear(row)))
        .collect())
}

/// Fraction of rows whose thresholded prediction (p >= 0.5 -> class 1)
/// matches the label.
pub fn accuracy(model: &LogisticModel, design: &DesignMatrix) -> Result<f64, GlmError> {
    let probs = predict_proba(model, design)?;
    let correct = probs
        .iter()
        .zip(&design.labels)
        .filter(|(&p, &y)| (p >= 0.5) == (y == 1))
        .count();
    Ok(correct as f64 / design.n_rows() as f64)
}

/// Unpenalized log-likelihood of the labels under the model.
pub fn log_likelihood(model: &LogisticModel, design: &DesignMatrix) -> Result<f64, GlmError> {
    if design.n_cols() != model.weights.len() {
        return Err(GlmError::DimensionMismatch {
            expected: model.weights.len(),
            actual: design.n_cols(),
        });
    }
    let mut ll = 0.0;
    for (row, &y) in design.values.rows().into_iter().zip(&design.labels) {
        let z = model.linear(row);
        ll += if y == 1 {
            log_sigmoid(z)
        } else {
            log_sigmoid(-z)
        };
    }
    Ok(ll)
}

/// Closed-form intercept-only model: `intercept = log(mean / (1 - mean))`.
///
/// Single-class label vectors clamp the intercept to a large finite value.
pub fn fit_null(
    labels: &[u8],
    n_cols: usize,
    column_labels: Vec<String>,
) -> Result<LogisticModel, GlmError> {
    let y = validate_labels(labels)?;
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let intercept = if mean <= 0.0 {
        -DEGENERATE_INTERCEPT
    } else if mean >= 1.0 {
        DEGENERATE_INTERCEPT
    } else {
        (mean / (1.0 - mean)).ln()
    };
    Ok(LogisticModel {
        intercept,
        weights: vec![0.0; n_cols],
        column_labels,
        l2_lambda: 0.0,
        converged: true,
        gradient_norm: 0.0,
    })
}
