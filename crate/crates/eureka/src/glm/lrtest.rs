//! Likelihood-ratio testing with Bonferroni correction.

use super::{chi_square_sf, log_likelihood, GlmError, LogisticModel, TestResult};
use crate::data::DesignMatrix;

/// Likelihood-ratio test of a fitted model against an intercept-only null.
///
/// Both log-likelihoods are the unpenalized likelihoods of the fitted
/// parameters on `design`. The statistic is floored at zero (the full
/// model's feasible set contains the null, so negative values can only be
/// numerical noise). Significance uses the Bonferroni-adjusted threshold
/// `alpha / m_tests` with strict inequality.
pub fn lr_test(
    full: &LogisticModel,
    null: &LogisticModel,
    design: &DesignMatrix,
    df: u32,
    alpha: f64,
    m_tests: usize,
) -> Result<TestResult, GlmError> {
    if df == 0 {
        return Err(GlmError::InvalidDegreesOfFreedom(df));
    }
    let ll_full = log_likelihood(full, design)?;
    let ll_null = log_likelihood(null, design)?;
    let statistic = (2.0 * (ll_full - ll_null)).max(0.0);
    let p_value = chi_square_sf(statistic, df)?;
    let m = m_tests.max(1);
    Ok(TestResult {
        statistic,
        df,
        p_value,
        alpha,
        m_tests: m,
        significant_after_bonferroni: p_value < alpha / m as f64,
    })
}

/// Bonferroni flags: `p_i < alpha / m` (strict) with `m = p_values.len()`.
pub fn bonferroni(p_values: &[f64], alpha: f64) -> Vec<bool> {
    let m = p_values.len().max(1) as f64;
    p_values.iter().map(|&p| p < alpha / m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::FeatureGroup;
    use ndarray::array;

    fn design_one_col() -> DesignMatrix {
        DesignMatrix {
            values: array![[1.0], [-1.0], [0.5], [-0.5]],
            column_labels: vec!["x".into()],
            groups: vec![FeatureGroup {
                feature: "x".into(),
                columns: 0..1,
            }],
            labels: vec![1, 0, 1, 0],
        }
    }

    #[test]
    fn identical_models_give_statistic_zero() {
        let dm = design_one_col();
        let null = super::super::fit_null(&dm.labels, 1, dm.column_labels.clone()).unwrap();
        let result = lr_test(&null, &null, &dm, 1, 0.05, 1).unwrap();
        assert_eq!(result.statistic, 0.0);
        assert_eq!(result.p_value, 1.0);
        assert!(!result.significant_after_bonferroni);
    }

    #[test]
    fn chi_square_threshold_value() {
        // statistic 3.84 at df 1 sits right at the 5% tail.
        let p = chi_square_sf(3.84, 1).unwrap();
        assert!((p - 0.05).abs() < 5e-4, "p = {p}");
    }

    #[test]
    fn informative_feature_is_significant() {
        let dm = design_one_col();
        let full = super::super::fit_logistic(&dm, 1e-4, 1e-8, 200).unwrap();
        let null = super::super::fit_null(&dm.labels, 1, dm.column_labels.clone()).unwrap();
        let result = lr_test(&full, &null, &dm, 1, 0.05, 1).unwrap();
        assert!(result.statistic > 0.0);
        assert!(result.p_value < 1.0);
    }

    #[test]
    fn zero_df_rejected() {
        let dm = design_one_col();
        let null = super::super::fit_null(&dm.labels, 1, dm.column_labels.clone()).unwrap();
        assert!(lr_test(&null, &null, &dm, 0, 0.05, 1).is_err());
    }

    #[test]
    fn bonferroni_thresholds() {
        assert_eq!(bonferroni(&[0.01, 0.2], 0.05), vec![true, false]);
        assert_eq!(bonferroni(&[0.04], 0.05), vec![true]);
        // Boundary: p exactly alpha/m is NOT significant.
        assert_eq!(bonferroni(&[0.025, 0.025], 0.05), vec![false, false]);
    }
}
