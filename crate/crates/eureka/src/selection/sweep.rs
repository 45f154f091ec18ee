//! The top-K interestingness sweep.

use super::{chance_rate, KSweepRecord, KSweepReport, SelectionError};
use crate::data::DesignMatrix;
use crate::glm::{accuracy, fit_logistic, fit_null, lr_test};
use crate::parallel;
use crate::ranking::Ranking;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub k_max: usize,
    pub alpha: f64,
    /// Near-unpenalized default keeps separable fits finite while the
    /// likelihood-ratio test treats the fit as a maximum-likelihood one.
    pub lambda: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl SweepConfig {
    pub fn new(k_max: usize) -> Self {
        Self {
            k_max,
            alpha: 0.05,
            lambda: 1e-4,
            tol: 1e-8,
            max_iter: 200,
        }
    }
}

/// Sweeps K = 1..=k_max with the default solver settings.
pub fn eureka_sweep(
    train: &DesignMatrix,
    test: &DesignMatrix,
    ranking: &Ranking,
    k_max: usize,
    alpha: f64,
) -> Result<KSweepReport, SelectionError> {
    let mut config = SweepConfig::new(k_max);
    config.alpha = alpha;
    eureka_sweep_with(train, test, ranking, &config)
}

/// For K = 1..=k_max: fit a logistic classifier on the top-K features only,
/// record train/test accuracy, and test it against the intercept-only null
/// with Bonferroni correction over the k_max tests. K' is the smallest K
/// whose model is strictly above the test chance rate AND significant.
pub fn eureka_sweep_with(
    train: &DesignMatrix,
    test: &DesignMatrix,
    ranking: &Ranking,
    config: &SweepConfig,
) -> Result<KSweepReport, SelectionError> {
    if ranking.is_empty() {
        return Err(SelectionError::EmptyRanking);
    }
    let d = train.groups.len();
    if config.k_max == 0 || config.k_max > d {
        return Err(SelectionError::KMaxTooLarge {
            k_max: config.k_max,
            d,
        });
    }
    let train_features: std::collections::BTreeSet<&str> =
        train.groups.iter().map(|g| g.feature.as_str()).collect();
    let ranked: std::collections::BTreeSet<&str> =
        ranking.order.iter().map(String::as_str).collect();
    if ranked != train_features || ranking.order.len() != d {
        return Err(SelectionError::RankingMismatch(format!(
            "ranking lists {} features, design matrix has {}",
            ranking.order.len(),
            d
        )));
    }

    let chance = chance_rate(&test.labels);
    let null = fit_null(&train.labels, 0, Vec::new())?;

    let records: Vec<Result<KSweepRecord, SelectionError>> =
        parallel::map_indexed(config.k_max, |idx| {
            let k = idx + 1;
            let subset: Vec<String> = ranking.order[..k].to_vec();
            let sub_train = train.select_features(&subset)?;
            let sub_test = test.select_features(&subset)?;
            let model = fit_logistic(&sub_train, config.lambda, config.tol, config.max_iter)?;
            let null_k = crate::glm::LogisticModel {
                weights: vec![0.0; sub_train.n_cols()],
                column_labels: sub_train.column_labels.clone(),
                ..null.clone()
            };
            let test_result = lr_test(
                &model,
                &null_k,
                &sub_train,
                sub_train.n_cols() as u32,
                config.alpha,
                config.k_max,
            )?;
            Ok(KSweepRecord {
                k,
                feature_added: subset[k - 1].clone(),
                features: subset,
                train_accuracy: accuracy(&model, &sub_train)?,
                test_accuracy: accuracy(&model, &sub_test)?,
                lr_statistic: test_result.statistic,
                p_value: test_result.p_value,
                significant: test_result.significant_after_bonferroni,
            })
        });
    let records: Vec<KSweepRecord> = records.into_iter().collect::<Result<_, _>>()?;

    let k_prime = records
        .iter()
        .find(|r| r.test_accuracy > chance && r.significant)
        .map(|r| r.k);

    Ok(KSweepReport {
        ranking: ranking.clone(),
        records,
        chance_rate: chance,
        k_prime,
        alpha: config.alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureGroup;
    use ndarray::Array2;

    /// Column 0 is constant (interesting but useless), column 1 separates
    /// the classes perfectly. Balanced labels.
    fn noise_then_signal(n: usize) -> (DesignMatrix, DesignMatrix) {
        let build = |rows: usize, offset: usize| {
            let values = Array2::from_shape_fn((rows, 2), |(i, j)| {
                if j == 0 {
                    0.0
                } else if (i + offset).is_multiple_of(2) {
                    -1.0 - (i % 3) as f64 * 0.1
                } else {
                    1.0 + (i % 3) as f64 * 0.1
                }
            });
            let labels = (0..rows).map(|i| ((i + offset) % 2) as u8).collect();
            DesignMatrix {
                values,
                column_labels: vec!["mystery".into(), "signal".into()],
                groups: vec![
                    FeatureGroup {
                        feature: "mystery".into(),
                        columns: 0..1,
                    },
                    FeatureGroup {
                        feature: "signal".into(),
                        columns: 1..2,
                    },
                ],
                labels,
            }
        };
        (build(n, 0), build(40, 0))
    }

    fn interestingness_order() -> Ranking {
        Ranking::new(vec!["mystery".into(), "signal".into()])
    }

    #[test]
    fn noise_first_ranking_selects_k_prime_two() {
        let (train, test) = noise_then_signal(200);
        let report = eureka_sweep(&train, &test, &interestingness_order(), 2, 0.05).unwrap();
        assert_eq!(report.chance_rate, 0.5);
        assert_eq!(report.records.len(), 2);
        // K=1 is the constant column: at-chance accuracy, not significant.
        assert!(report.records[0].test_accuracy <= report.chance_rate);
        assert!(!report.records[0].significant);
        // K=2 adds the separator.
        assert_eq!(report.records[1].test_accuracy, 1.0);
        assert!(report.records[1].significant);
        assert_eq!(report.k_prime, Some(2));
    }

    #[test]
    fn k_prime_definition_is_exact() {
        let (train, test) = noise_then_signal(200);
        let report = eureka_sweep(&train, &test, &interestingness_order(), 2, 0.05).unwrap();
        let k_prime = report.k_prime.unwrap();
        for r in &report.records {
            let qualifies = r.test_accuracy > report.chance_rate && r.significant;
            if r.k < k_prime {
                assert!(!qualifies);
            }
            if r.k == k_prime {
                assert!(qualifies);
            }
        }
    }

    #[test]
    fn nesting_and_full_model_consistency() {
        let (train, test) = noise_then_signal(100);
        let report = eureka_sweep(&train, &test, &interestingness_order(), 2, 0.05).unwrap();
        for pair in report.records.windows(2) {
            assert!(pair[1].features.starts_with(&pair[0].features));
        }
        // At K = d the sweep model is the all-features fit.
        let full = fit_logistic(&train, 1e-4, 1e-8, 200).unwrap();
        let full_acc = accuracy(&full, &test).unwrap();
        assert_eq!(report.records.last().unwrap().test_accuracy, full_acc);
    }

    #[test]
    fn validation_errors() {
        let (train, test) = noise_then_signal(50);
        let ranking = interestingness_order();
        assert!(matches!(
            eureka_sweep(&train, &test, &ranking, 3, 0.05),
            Err(SelectionError::KMaxTooLarge { k_max: 3, d: 2 })
        ));
        assert!(matches!(
            eureka_sweep(&train, &test, &Ranking::new(vec![]), 1, 0.05),
            Err(SelectionError::EmptyRanking)
        ));
        let wrong = Ranking::new(vec!["mystery".into(), "other".into()]);
        assert!(matches!(
            eureka_sweep(&train, &test, &wrong, 2, 0.05),
            Err(SelectionError::RankingMismatch(_))
        ));
    }

    #[test]
    fn sweep_matches_sequential_execution() {
        let (train, test) = noise_then_signal(120);
        let ranking = interestingness_order();
        let par = eureka_sweep(&train, &test, &ranking, 2, 0.05).unwrap();
        let seq =
            crate::parallel::sequential(|| eureka_sweep(&train, &test, &ranking, 2, 0.05).unwrap());
        assert_eq!(par.k_prime, seq.k_prime);
        for (a, b) in par.records.iter().zip(&seq.records) {
            assert_eq!(a.test_accuracy, b.test_accuracy);
            assert_eq!(a.p_value, b.p_value);
        }
    }
}
