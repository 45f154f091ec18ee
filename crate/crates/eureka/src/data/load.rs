//! CSV loading with optional schema inference.

use super::{CellValue, DataError, Dataset, FeatureKind, FeatureSchema, FeatureSpec};
use std::path::Path;

/// Parsing knobs for [`load_csv_with`].
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Tokens recorded as missing values. Empty cells are always missing.
    pub missing_sentinels: Vec<String>,
    /// Trim surrounding whitespace from every field before interpreting it.
    pub trim: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            missing_sentinels: vec![String::new(), "?".into(), "NA".into()],
            trim: true,
        }
    }
}

impl LoadOptions {
    fn is_missing(&self, cell: &str) -> bool {
        self.missing_sentinels.iter().any(|s| s == cell)
    }
}

/// Loads a CSV file with default options (sentinels `""`, `"?"`, `"NA"`).
///
/// With a schema, columns are matched to features by header name and extra
/// columns are ignored. Without one, the last column becomes the label and
/// feature kinds are inferred: a column is numeric when every non-missing
/// cell parses as a number.
pub fn load_csv(
    path: impl AsRef<Path>,
    schema: Option<&FeatureSchema>,
) -> Result<Dataset, DataError> {
    load_csv_with(path, schema, &LoadOptions::default())
}

pub fn load_csv_with(
    path: impl AsRef<Path>,
    schema: Option<&FeatureSchema>,
    options: &LoadOptions,
) -> Result<Dataset, DataError> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(if options.trim {
            csv::Trim::All
        } else {
            csv::Trim::None
        })
        .from_path(path)
        .map_err(|e| map_csv_error(path, e))?;

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| map_csv_error(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();

    let mut records = Vec::new();
    for record in reader.records() {
        records.push(record.map_err(|e| map_csv_error(path, e))?);
    }
    if records.is_empty() {
        return Err(DataError::EmptyDataset);
    }

    match schema {
        Some(schema) => from_schema(schema, &header, &records, options),
        None => infer_and_build(&header, &records, options),
    }
}

fn map_csv_error(path: &Path, e: csv::Error) -> DataError {
    let line = e.position().map(csv::Position::line).unwrap_or_default();
    match e.kind() {
        csv::ErrorKind::Io(_) => DataError::Io {
            path: path.display().to_string(),
            source: std::io::Error::other(e.to_string()),
        },
        _ => DataError::MalformedCsv {
            line,
            message: e.to_string(),
        },
    }
}

fn from_schema(
    schema: &FeatureSchema,
    header: &[String],
    records: &[csv::StringRecord],
    options: &LoadOptions,
) -> Result<Dataset, DataError> {
    schema.validate()?;
    let column_of = |name: &str| -> Result<usize, DataError> {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| DataError::MissingColumn(name.to_owned()))
    };
    let feature_cols: Vec<usize> = schema
        .features
        .iter()
        .map(|f| column_of(&f.name))
        .collect::<Result<_, _>>()?;
    let label_col = column_of(&schema.label)?;

    let mut rows = Vec::with_capacity(records.len());
    let mut labels = Vec::with_capacity(records.len());
    for (row_idx, record) in records.iter().enumerate() {
        let mut row = Vec::with_capacity(schema.features.len());
        for (feature, &col) in schema.features.iter().zip(&feature_cols) {
            let cell = &record[col];
            row.push(parse_cell(cell, feature, row_idx, options)?);
        }
        let label = record[label_col].to_owned();
        if schema.class_index(&label).is_none() {
            return Err(DataError::UnknownLabelClass {
                row: row_idx,
                label,
            });
        }
        rows.push(row);
        labels.push(label);
    }
    Dataset::new(schema.clone(), rows, labels)
}

fn parse_cell(
    cell: &str,
    feature: &FeatureSpec,
    row: usize,
    options: &LoadOptions,
) -> Result<CellValue, DataError> {
    if options.is_missing(cell) {
        return Ok(CellValue::Missing);
    }
    match feature.kind {
        FeatureKind::Numeric => {
            cell.parse::<f64>()
                .map(CellValue::Number)
                .map_err(|_| DataError::NonNumericCell {
                    row,
                    feature: feature.name.clone(),
                    value: cell.to_owned(),
                })
        }
        FeatureKind::Categorical => Ok(CellValue::Token(cell.to_owned())),
    }
}

/// Schema inference: last column is the label, every other column a feature.
fn infer_and_build(
    header: &[String],
    records: &[csv::StringRecord],
    options: &LoadOptions,
) -> Result<Dataset, DataError> {
    if header.len() < 2 {
        return Err(DataError::InvalidSchema(
            "need at least one feature column and a label column".into(),
        ));
    }
    let d = header.len() - 1;

    let mut kinds = vec![FeatureKind::Numeric; d];
    for record in records {
        for (j, kind) in kinds.iter_mut().enumerate() {
            let cell = &record[j];
            if *kind == FeatureKind::Numeric
                && !options.is_missing(cell)
                && cell.parse::<f64>().is_err()
            {
                *kind = FeatureKind::Categorical;
            }
        }
    }

    let mut classes: Vec<String> = records.iter().map(|r| r[d].to_owned()).collect();
    classes.sort();
    classes.dedup();

    let schema = FeatureSchema {
        features: header[..d]
            .iter()
            .zip(&kinds)
            .map(|(name, &kind)| FeatureSpec {
                name: name.clone(),
                kind,
                description: None,
            })
            .collect(),
        label: header[d].clone(),
        classes,
    };
    from_schema(&schema, header, records, options)
}
