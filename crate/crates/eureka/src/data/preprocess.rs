//! Preprocessing: imputation, standardization, one-hot encoding.

use super::{CellValue, DataError, Dataset, FeatureKind, FeatureSchema};
use ndarray::Array2;
use std::ops::Range;

/// Training statistics for one numeric feature.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericStats {
    pub mean: f64,
    /// Population standard deviation (divides by n).
    pub stddev: f64,
    pub median: f64,
}

/// Training statistics for one categorical feature.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoricalStats {
    /// Most frequent token; ties broken lexicographically.
    pub mode: String,
    /// Sorted distinct tokens observed in training.
    pub vocabulary: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureStats {
    Numeric(NumericStats),
    Categorical(CategoricalStats),
}

/// Per-feature statistics fitted on training rows only.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    schema: FeatureSchema,
    stats: Vec<FeatureStats>,
    fitted_rows: usize,
}

/// Fits imputation and encoding statistics on (training) data.
pub fn fit_preprocessor(train: &Dataset) -> Result<Preprocessor, DataError> {
    let mut stats = Vec::with_capacity(train.d());
    for (j, feature) in train.schema.features.iter().enumerate() {
        let column = train.rows.iter().map(|r| &r[j]);
        let stat = match feature.kind {
            FeatureKind::Numeric => {
                let mut values: Vec<f64> = column
                    .filter_map(|c| match c {
                        CellValue::Number(v) => Some(*v),
                        _ => None,
                    })
                    .collect();
                if values.is_empty() {
                    return Err(DataError::AllValuesMissing(feature.name.clone()));
                }
                values.sort_by(f64::total_cmp);
                let n = values.len() as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                FeatureStats::Numeric(NumericStats {
                    mean,
                    stddev: var.sqrt(),
                    median: median_of_sorted(&values),
                })
            }
            FeatureKind::Categorical => {
                let mut counts = std::collections::BTreeMap::<&str, usize>::new();
                for cell in column {
                    if let CellValue::Token(t) = cell {
                        *counts.entry(t).or_default() += 1;
                    }
                }
                if counts.is_empty() {
                    return Err(DataError::AllValuesMissing(feature.name.clone()));
                }
                // BTreeMap iterates lexicographically, so the first maximal
                // count wins ties.
                let best = *counts.values().max().unwrap();
                let mode = counts
                    .iter()
                    .find(|(_, &c)| c == best)
                    .map(|(t, _)| t.to_string())
                    .unwrap();
                FeatureStats::Categorical(CategoricalStats {
                    vocabulary: counts.keys().map(|t| t.to_string()).collect(),
                    mode,
                })
            }
        };
        stats.push(stat);
    }
    Ok(Preprocessor {
        schema: train.schema.clone(),
        stats,
        fitted_rows: train.n(),
    })
}

/// Median of an ascending slice; even counts average the two middle values.
fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

impl Preprocessor {
    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    pub fn stats(&self) -> &[FeatureStats] {
        &self.stats
    }

    pub fn fitted_rows(&self) -> usize {
        self.fitted_rows
    }

    /// Encodes a dataset into a design matrix using the fitted statistics.
    ///
    /// Numerics are imputed with the training median and standardized
    /// (zero-variance columns encode to zero); categoricals are imputed with
    /// the training mode and one-hot encoded over the training vocabulary,
    /// with unseen tokens encoding to an all-zero block.
    pub fn transform(&self, ds: &Dataset) -> Result<DesignMatrix, DataError> {
        if !self.schema.compatible_with(&ds.schema) {
            return Err(DataError::SchemaMismatch);
        }
        if self.schema.classes.len() != 2 {
            return Err(DataError::NonBinaryLabels(self.schema.classes.len()));
        }

        let mut groups = Vec::with_capacity(self.schema.features.len());
        let mut column_labels = Vec::new();
        let mut offset = 0;
        for (feature, stat) in self.schema.features.iter().zip(&self.stats) {
            let width = match stat {
                FeatureStats::Numeric(_) => {
                    column_labels.push(feature.name.clone());
                    1
                }
                FeatureStats::Categorical(c) => {
                    for token in &c.vocabulary {
                        column_labels.push(format!("{}={}", feature.name, token));
                    }
                    c.vocabulary.len()
                }
            };
            groups.push(FeatureGroup {
                feature: feature.name.clone(),
                columns: offset..offset + width,
            });
            offset += width;
        }
        let p = offset;

        let n = ds.n();
        let mut values = Array2::<f64>::zeros((n, p));
        for (i, row) in ds.rows.iter().enumerate() {
            for ((cell, stat), group) in row.iter().zip(&self.stats).zip(&groups) {
                match stat {
                    FeatureStats::Numeric(s) => {
                        let raw = match cell {
                            CellValue::Number(v) => *v,
                            _ => s.median,
                        };
                        values[[i, group.columns.start]] = if s.stddev > 0.0 {
                            (raw - s.mean) / s.stddev
                        } else {
                            0.0
                        };
                    }
                    FeatureStats::Categorical(s) => {
                        let token = match cell {
                            CellValue::Token(t) => t.as_str(),
                            _ => s.mode.as_str(),
                        };
                        if let Ok(pos) = s.vocabulary.binary_search_by(|v| v.as_str().cmp(token)) {
                            values[[i, group.columns.start + pos]] = 1.0;
                        }
                    }
                }
            }
        }

        let labels = ds
            .labels
            .iter()
            .map(|l| self.schema.class_index(l).expect("validated") as u8)
            .collect();
        Ok(DesignMatrix {
            values,
            column_labels,
            groups,
            labels,
        })
    }
}

/// Contiguous design-matrix columns produced by one feature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureGroup {
    pub feature: String,
    pub columns: Range<usize>,
}

/// Numeric encoding of a dataset: an n×p matrix, per-column labels, the
/// feature→column-range map, and binary labels in {0, 1}.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    pub values: Array2<f64>,
    pub column_labels: Vec<String>,
    pub groups: Vec<FeatureGroup>,
    pub labels: Vec<u8>,
}

impl DesignMatrix {
    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.values.ncols()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.groups.iter().map(|g| g.feature.clone()).collect()
    }

    pub fn group(&self, feature: &str) -> Option<&FeatureGroup> {
        self.groups.iter().find(|g| g.feature == feature)
    }

    /// New matrix keeping only the columns of the named features, in the
    /// given order; groups are re-based accordingly.
    pub fn select_features(&self, names: &[String]) -> Result<DesignMatrix, DataError> {
        let mut groups = Vec::with_capacity(names.len());
        let mut cols = Vec::new();
        let mut offset = 0;
        for name in names {
            let group = self
                .group(name)
                .ok_or_else(|| DataError::UnknownFeature(name.clone()))?;
            let width = group.columns.len();
            cols.extend(group.columns.clone());
            groups.push(FeatureGroup {
                feature: name.clone(),
                columns: offset..offset + width,
            });
            offset += width;
        }
        let values = self.values.select(ndarray::Axis(1), &cols);
        let column_labels = cols
            .iter()
            .map(|&c| self.column_labels[c].clone())
            .collect();
        Ok(DesignMatrix {
            values,
            column_labels,
            groups,
            labels: self.labels.clone(),
        })
    }

    /// New matrix keeping only the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> DesignMatrix {
        DesignMatrix {
            values: self.values.select(ndarray::Axis(0), indices),
            column_labels: self.column_labels.clone(),
            groups: self.groups.clone(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Checks that groups exactly partition the column range.
    pub fn validate_groups(&self) -> Result<(), DataError> {
        let mut covered = vec![false; self.n_cols()];
        for g in &self.groups {
            for c in g.columns.clone() {
                if c >= covered.len() || covered[c] {
                    return Err(DataError::InvalidSchema(format!(
                        "group {:?} overlaps or exceeds columns",
                        g.feature
                    )));
                }
                covered[c] = true;
            }
        }
        if covered.iter().all(|&c| c) {
            Ok(())
        } else {
            Err(DataError::InvalidSchema(
                "column not covered by any group".into(),
            ))
        }
    }
}
