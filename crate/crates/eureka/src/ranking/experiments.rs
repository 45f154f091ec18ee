//! Experiment harnesses: estimator accuracy versus comparison budget, and
//! run-to-run ranking stability.

use super::{
    active_rank, analytic_borda, borda_count, kendall_tau, mae, spearman_rho, BordaEstimate,
    RankTask, Ranking, RankingError,
};
use crate::judge::{FeatureRef, Judge, PreferenceMatrix};
use crate::parallel;
use crate::seeding::mix;
use serde::{Deserialize, Serialize};

/// Ground truth for benchmark MAE: exact scores from a preference matrix, or
/// a surrogate estimated by Monte Carlo counting with a large budget.
#[derive(Debug, Clone)]
pub enum TruthSpec {
    Analytic(PreferenceMatrix),
    Sampled { n0: u64 },
}

/// One benchmark measurement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankBenchCell {
    pub method: String,
    pub n: u64,
    pub repeat: u32,
    pub mae: f64,
}

/// MAE-versus-budget curves for counting and active ranking.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankBenchReport {
    pub ns: Vec<u64>,
    pub repeats: u32,
    pub cells: Vec<RankBenchCell>,
    /// Per (method, n): mean MAE over the successful repeats.
    pub curves: Vec<(String, u64, f64)>,
    /// Human-readable descriptions of failed cells.
    pub failures: Vec<String>,
}

impl RankBenchReport {
    /// Mean curve for one method, in the order of `ns`.
    pub fn curve(&self, method: &str) -> Vec<f64> {
        self.ns
            .iter()
            .filter_map(|&n| {
                self.curves
                    .iter()
                    .find(|(m, cn, _)| m == method && *cn == n)
                    .map(|(_, _, v)| *v)
            })
            .collect()
    }

    /// CSV rows `(method, n, metric, value)`: per-repeat `mae` rows followed
    /// by `mae_mean` summary rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,n,metric,value\n");
        for cell in &self.cells {
            out.push_str(&format!("{},{},mae,{}\n", cell.method, cell.n, cell.mae));
        }
        for (method, n, value) in &self.curves {
            out.push_str(&format!("{method},{n},mae_mean,{value}\n"));
        }
        out
    }
}

/// Runs counting and active estimation over a budget grid, measuring the MAE
/// of the estimated Borda scores against the ground truth. Repeats are
/// seeded independently and run in parallel.
#[allow(clippy::too_many_arguments)]
pub fn rankbench<J: Judge + ?Sized>(
    features: &[FeatureRef],
    judge: &J,
    task: &RankTask,
    truth: &TruthSpec,
    ns: &[u64],
    repeats: u32,
    delta: f64,
    seed: u64,
) -> Result<RankBenchReport, RankingError> {
    if ns.is_empty() || repeats == 0 {
        return Err(RankingError::InvalidParameter(
            "need at least one budget and one repeat".into(),
        ));
    }
    let max_n = *ns.iter().max().expect("non-empty");
    if let TruthSpec::Sampled { n0 } = truth {
        if *n0 <= max_n {
            return Err(RankingError::InvalidParameter(format!(
                "surrogate-truth budget {n0} must exceed the largest benchmark budget {max_n}"
            )));
        }
    }
    let analytic_truth = match truth {
        TruthSpec::Analytic(matrix) => Some(analytic_borda(matrix)?),
        TruthSpec::Sampled { .. } => None,
    };

    type RepeatOut = Vec<Result<RankBenchCell, String>>;
    let per_repeat: Vec<RepeatOut> = parallel::map_indexed(repeats as usize, |r| {
        let r = r as u32;
        let truth_estimate: Result<BordaEstimate, String> = match (&analytic_truth, truth) {
            (Some(t), _) => Ok(t.clone()),
            (None, TruthSpec::Sampled { n0 }) => {
                borda_count(features, judge, task, *n0, mix(&[seed, u64::from(r), 0x77]))
                    .map(|o| o.estimate)
                    .map_err(|e| format!("truth sample, repeat {r}: {e}"))
            }
            (None, TruthSpec::Analytic(_)) => unreachable!(),
        };
        let truth_estimate = match truth_estimate {
            Ok(t) => t,
            Err(e) => return vec![Err(e)],
        };

        let mut cells = Vec::with_capacity(ns.len() * 2);
        for &n in ns {
            let counting = borda_count(features, judge, task, n, mix(&[seed, u64::from(r), n, 1]))
                .map_err(|e| format!("counting, n={n}, repeat {r}: {e}"))
                .and_then(|o| {
                    mae(&o.estimate, &truth_estimate)
                        .map_err(|e| format!("counting, n={n}, repeat {r}: {e}"))
                })
                .map(|value| RankBenchCell {
                    method: "counting".into(),
                    n,
                    repeat: r,
                    mae: value,
                });
            cells.push(counting);

            let active = active_rank(
                features,
                judge,
                task,
                n,
                delta,
                mix(&[seed, u64::from(r), n, 2]),
            )
            .map_err(|e| format!("active, n={n}, repeat {r}: {e}"))
            .and_then(|o| {
                mae(&o.estimate, &truth_estimate)
                    .map_err(|e| format!("active, n={n}, repeat {r}: {e}"))
            })
            .map(|value| RankBenchCell {
                method: "active".into(),
                n,
                repeat: r,
                mae: value,
            });
            cells.push(active);
        }
        cells
    });

    let mut cells = Vec::new();
    let mut failures = Vec::new();
    for repeat_cells in per_repeat {
        for cell in repeat_cells {
            match cell {
                Ok(c) => cells.push(c),
                Err(e) => failures.push(e),
            }
        }
    }

    let mut curves = Vec::new();
    for method in ["counting", "active"] {
        for &n in ns {
            let values: Vec<f64> = cells
                .iter()
                .filter(|c| c.method == method && c.n == n)
                .map(|c| c.mae)
                .collect();
            if !values.is_empty() {
                curves.push((
                    method.to_string(),
                    n,
                    values.iter().sum::<f64>() / values.len() as f64,
                ));
            }
        }
    }

    Ok(RankBenchReport {
        ns: ns.to_vec(),
        repeats,
        cells,
        curves,
        failures,
    })
}

/// How each stability run produces a ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankMethod {
    /// Borda counting with this many comparisons per run.
    Pairwise { n_comparisons: u64 },
    /// One full-ranking prompt per run.
    Direct,
}

impl RankMethod {
    fn name(&self) -> &'static str {
        match self {
            RankMethod::Pairwise { .. } => "pairwise",
            RankMethod::Direct => "direct",
        }
    }
}

/// Mean and sample standard deviation of a set of values.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SummaryStat {
    pub mean: f64,
    pub std: f64,
}

impl SummaryStat {
    fn from_values(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

/// Rank correlations between repeated ranking runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilityReport {
    pub method: String,
    pub runs: u32,
    /// Runs that failed and were excluded.
    pub failures: u32,
    pub kendall: SummaryStat,
    pub spearman: SummaryStat,
    /// Per run-pair correlations: (run_i, run_j, tau, rho).
    pub pairs: Vec<(u32, u32, f64, f64)>,
}

impl StabilityReport {
    /// CSV rows `(method, run_pair, metric, value)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,run_pair,metric,value\n");
        for (i, j, tau, rho) in &self.pairs {
            out.push_str(&format!("{},{i}-{j},kendall_tau,{tau}\n", self.method));
            out.push_str(&format!("{},{i}-{j},spearman_rho,{rho}\n", self.method));
        }
        out.push_str(&format!(
            "{},all,kendall_tau_mean,{}\n{},all,kendall_tau_std,{}\n",
            self.method, self.kendall.mean, self.method, self.kendall.std
        ));
        out.push_str(&format!(
            "{},all,spearman_rho_mean,{}\n{},all,spearman_rho_std,{}\n",
            self.method, self.spearman.mean, self.method, self.spearman.std
        ));
        out
    }
}

/// Generates `runs` rankings with the given method and reports the rank
/// correlations across all run pairs. Failed runs are excluded and counted.
pub fn stability_experiment<J: Judge + ?Sized>(
    features: &[FeatureRef],
    judge: &J,
    task: &RankTask,
    method: RankMethod,
    runs: u32,
    seed: u64,
) -> Result<StabilityReport, RankingError> {
    if runs < 2 {
        return Err(RankingError::InvalidParameter(
            "stability needs at least two runs".into(),
        ));
    }
    if features.len() < 2 {
        return Err(RankingError::TooFewFeatures(features.len()));
    }

    let rankings: Vec<Result<Ranking, String>> = parallel::map_indexed(runs as usize, |run| {
        let run_seed = mix(&[seed, run as u64, 0x57ab]);
        match method {
            RankMethod::Pairwise { n_comparisons } => {
                borda_count(features, judge, task, n_comparisons, run_seed)
                    .map(|o| o.estimate.ranking())
                    .map_err(|e| format!("run {run}: {e}"))
            }
            RankMethod::Direct => {
                let query = crate::judge::DirectRankQuery {
                    task_description: task.description.clone(),
                    label_name: task.label_name.clone(),
                    features: features.to_vec(),
                };
                judge
                    .direct_rank(&query, run_seed)
                    .map(Ranking::new)
                    .map_err(|e| format!("run {run}: {e}"))
            }
        }
    });

    let mut ok_runs: Vec<(u32, Ranking)> = Vec::new();
    let mut failures = 0u32;
    for (run, outcome) in rankings.into_iter().enumerate() {
        match outcome {
            Ok(r) => ok_runs.push((run as u32, r)),
            Err(_) => failures += 1,
        }
    }
    if ok_runs.len() < 2 {
        return Err(RankingError::TooManyFailures { failures, runs });
    }

    let mut pairs = Vec::with_capacity(ok_runs.len() * (ok_runs.len() - 1) / 2);
    for a in 0..ok_runs.len() {
        for b in a + 1..ok_runs.len() {
            let tau = kendall_tau(&ok_runs[a].1, &ok_runs[b].1)?;
            let rho = spearman_rho(&ok_runs[a].1, &ok_runs[b].1)?;
            pairs.push((ok_runs[a].0, ok_runs[b].0, tau, rho));
        }
    }
    let taus: Vec<f64> = pairs.iter().map(|p| p.2).collect();
    let rhos: Vec<f64> = pairs.iter().map(|p| p.3).collect();
    Ok(StabilityReport {
        method: method.name().to_string(),
        runs,
        failures,
        kendall: SummaryStat::from_values(&taus),
        spearman: SummaryStat::from_values(&rhos),
        pairs,
    })
}
