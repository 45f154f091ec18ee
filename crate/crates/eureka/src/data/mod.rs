//! Tabular data ingestion and preprocessing.
//!
//! [`load_csv`] reads an RFC-4180-style file (header row required) into a
//! typed [`Dataset`], inferring the schema when none is supplied. A
//! [`Preprocessor`] fitted on training rows standardizes numerics, one-hot
//! encodes categoricals, and imputes missing cells (median / mode), yielding
//! a [`DesignMatrix`] whose column groups track which columns belong to each
//! original feature.

mod load;
mod preprocess;
mod split;

pub use load::{load_csv, load_csv_with, LoadOptions};
pub use preprocess::{
    fit_preprocessor, CategoricalStats, DesignMatrix, FeatureGroup, FeatureStats, NumericStats,
    Preprocessor,
};
pub use split::{stratified_split, stratified_split_indices};

use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: u64, message: String },
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("row {row}: unknown label class {label:?}")]
    UnknownLabelClass { row: usize, label: String },
    #[error("row {row}, feature {feature:?}: cannot parse {value:?} as a number")]
    NonNumericCell {
        row: usize,
        feature: String,
        value: String,
    },
    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),
    #[error("file contains no data rows")]
    EmptyDataset,
    #[error("feature {0:?} has no non-missing training values")]
    AllValuesMissing(String),
    #[error("test fraction must lie in (0, 1), got {0}")]
    InvalidTestFraction(f64),
    #[error("class {class:?} has {rows} rows; cannot populate both split sides")]
    ClassTooSmall { class: String, rows: usize },
    #[error("dataset schema does not match the schema the preprocessor was fitted on")]
    SchemaMismatch,
    #[error("design matrices require exactly 2 label classes, got {0}")]
    NonBinaryLabels(usize),
    #[error("unknown feature {0:?}")]
    UnknownFeature(String),
}

/// Whether a feature holds numbers or categorical tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Numeric,
    Categorical,
}

/// One feature column: its name, kind, and optional free-text description
/// (the description is what a judge sees alongside the name).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

/// Column layout of a dataset: feature specs, the label column name, and the
/// ordered list of label classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSchema {
    pub features: Vec<FeatureSpec>,
    pub label: String,
    pub classes: Vec<String>,
}

impl FeatureSchema {
    /// Parses a schema from its JSON file representation.
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, DataError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| DataError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let schema: FeatureSchema =
            serde_json::from_str(&text).map_err(|e| DataError::InvalidSchema(e.to_string()))?;
        schema.validate()?;
        Ok(schema)
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.features.is_empty() {
            return Err(DataError::InvalidSchema(
                "at least one feature required".into(),
            ));
        }
        let mut seen = std::collections::HashSet::new();
        for f in &self.features {
            if f.name.is_empty() {
                return Err(DataError::InvalidSchema("empty feature name".into()));
            }
            if !seen.insert(f.name.as_str()) {
                return Err(DataError::InvalidSchema(format!(
                    "duplicate feature name {:?}",
                    f.name
                )));
            }
        }
        if seen.contains(self.label.as_str()) {
            return Err(DataError::InvalidSchema(format!(
                "label column {:?} also listed as a feature",
                self.label
            )));
        }
        if self.classes.len() < 2 {
            return Err(DataError::InvalidSchema(
                "at least two label classes required".into(),
            ));
        }
        Ok(())
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.features.iter().find(|f| f.name == name)
    }

    /// Index of a class token in the ordered class list.
    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == label)
    }

    /// True when the two schemas describe the same column layout (names,
    /// kinds, label, classes); descriptions are ignored.
    pub fn compatible_with(&self, other: &FeatureSchema) -> bool {
        self.label == other.label
            && self.classes == other.classes
            && self.features.len() == other.features.len()
            && self
                .features
                .iter()
                .zip(&other.features)
                .all(|(a, b)| a.name == b.name && a.kind == b.kind)
    }
}

/// A raw cell before encoding.
#[derive(Debug, Clone, PartialEq)]
pub enum CellValue {
    Number(f64),
    Token(String),
    Missing,
}

/// A typed table: schema plus raw rows and their class labels.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub schema: FeatureSchema,
    pub rows: Vec<Vec<CellValue>>,
    pub labels: Vec<String>,
}

impl Dataset {
    pub fn new(
        schema: FeatureSchema,
        rows: Vec<Vec<CellValue>>,
        labels: Vec<String>,
    ) -> Result<Self, DataError> {
        schema.validate()?;
        if rows.is_empty() {
            return Err(DataError::EmptyDataset);
        }
        let d = schema.features.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(DataError::MalformedCsv {
                    line: i as u64 + 2,
                    message: format!("expected {d} cells, found {}", row.len()),
                });
            }
        }
        for (i, label) in labels.iter().enumerate() {
            if schema.class_index(label).is_none() {
                return Err(DataError::UnknownLabelClass {
                    row: i,
                    label: label.clone(),
                });
            }
        }
        assert_eq!(rows.len(), labels.len());
        Ok(Self {
            schema,
            rows,
            labels,
        })
    }

    /// Number of rows.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of features.
    pub fn d(&self) -> usize {
        self.schema.features.len()
    }

    /// Per-row class indices in schema class order.
    pub fn class_ids(&self) -> Vec<usize> {
        self.labels
            .iter()
            .map(|l| {
                self.schema
                    .class_index(l)
                    .expect("validated on construction")
            })
            .collect()
    }

    /// New dataset containing the given rows, in the given order.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_feature_schema() -> FeatureSchema {
        FeatureSchema {
            features: vec![
                FeatureSpec {
                    name: "a".into(),
                    kind: FeatureKind::Numeric,
                    description: None,
                },
                FeatureSpec {
                    name: "b".into(),
                    kind: FeatureKind::Categorical,
                    description: Some("a token".into()),
                },
            ],
            label: "y".into(),
            classes: vec!["0".into(), "1".into()],
        }
    }

    #[test]
    fn schema_validation_catches_duplicates_and_label_overlap() {
        let mut s = two_feature_schema();
        s.features[1].name = "a".into();
        assert!(s.validate().is_err());

        let mut s = two_feature_schema();
        s.label = "a".into();
        assert!(s.validate().is_err());

        let mut s = two_feature_schema();
        s.classes = vec!["only".into()];
        assert!(s.validate().is_err());
    }

    #[test]
    fn dataset_rejects_ragged_rows_and_bad_labels() {
        let schema = two_feature_schema();
        let err = Dataset::new(
            schema.clone(),
            vec![vec![CellValue::Number(1.0)]],
            vec!["0".into()],
        );
        assert!(matches!(err, Err(DataError::MalformedCsv { .. })));

        let err = Dataset::new(
            schema,
            vec![vec![CellValue::Number(1.0), CellValue::Token("x".into())]],
            vec!["2".into()],
        );
        assert!(matches!(err, Err(DataError::UnknownLabelClass { .. })));
    }

    #[test]
    fn schema_json_round_trip() {
        let s = two_feature_schema();
        let json = serde_json::to_string(&s).unwrap();
        let back: FeatureSchema = serde_json::from_str(&json).unwrap();
        assert_eq!(s, back);
    }
}
