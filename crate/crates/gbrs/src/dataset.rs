//! Loading, encoding, and normalizing tabular decision systems.
//!
//! A [`DecisionSystem`] keeps two aligned matrices: the encoded raw values
//! (categorical columns integer-coded by first appearance) and the working
//! values, which are per-column min-max scaled to `[0,1]` after
//! [`DecisionSystem::normalize`]. Exact-equality oracles read the raw
//! matrix; distance-based oracles read the normalized one.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{GbrsError, Result};

/// How a column's values are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Numeric,
    Categorical,
}

/// Per-attribute metadata recorded at load time.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttributeMeta {
    pub name: String,
    pub kind: AttributeKind,
    /// Original category strings in first-appearance order; the raw code of
    /// a category is its index here. `None` for numeric columns.
    pub categories: Option<Vec<String>>,
    pub raw_min: f64,
    pub raw_max: f64,
}

/// Distance used when comparing rows or points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Metric {
    Euclidean,
    /// Minkowski distance with the given exponent `p >= 1`.
    Minkowski(f64),
}

impl Default for Metric {
    fn default() -> Self {
        Metric::Euclidean
    }
}

impl Metric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        assert_eq!(a.len(), b.len(), "dimension mismatch in distance");
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Minkowski(p) => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs().powf(*p))
                .sum::<f64>()
                .powf(1.0 / *p),
        }
    }
}

/// An ordered set of distinct condition-attribute indexes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttributeSubset {
    indexes: Vec<usize>,
}

impl AttributeSubset {
    /// Builds a subset, rejecting duplicates and out-of-range indexes.
    pub fn new(indexes: Vec<usize>, d: usize) -> Result<Self> {
        let mut seen = vec![false; d];
        for &i in &indexes {
            if i >= d {
                return Err(GbrsError::Config(format!(
                    "attribute index {i} out of range (d = {d})"
                )));
            }
            if seen[i] {
                return Err(GbrsError::Config(format!("duplicate attribute index {i}")));
            }
            seen[i] = true;
        }
        Ok(Self { indexes })
    }

    /// All `d` attributes in natural order.
    pub fn full(d: usize) -> Self {
        Self {
            indexes: (0..d).collect(),
        }
    }

    pub fn empty() -> Self {
        Self { indexes: Vec::new() }
    }

    /// Appends an attribute; the selection order is preserved.
    pub fn with(&self, a: usize) -> Self {
        let mut indexes = self.indexes.clone();
        indexes.push(a);
        Self { indexes }
    }

    pub fn indexes(&self) -> &[usize] {
        &self.indexes
    }

    pub fn len(&self) -> usize {
        self.indexes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indexes.is_empty()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.indexes.contains(&a)
    }
}

/// The universe: an encoded sample matrix with labels and metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecisionSystem {
    raw: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
    labels: Vec<usize>,
    attribute_meta: Vec<AttributeMeta>,
    label_names: Vec<String>,
    normalized: bool,
}

/// Which column holds the decision label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Index(usize),
}

/// Options controlling CSV ingestion.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub has_header: bool,
    pub label_column: LabelColumn,
    /// Per-column kind overrides, keyed by original file column index.
    pub declared_kinds: HashMap<usize, AttributeKind>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            has_header: true,
            label_column: LabelColumn::Last,
            declared_kinds: HashMap::new(),
        }
    }
}

impl DecisionSystem {
    /// Loads a comma-separated file into an unnormalized decision system.
    ///
    /// Categorical columns (any column with a non-numeric token, unless
    /// declared otherwise) are integer-encoded in first-appearance order,
    /// as are the labels. Raw values are retained; call
    /// [`DecisionSystem::normalize`] before distance-based work.
    pub fn load_csv(path: &Path, options: &LoadOptions) -> Result<Self> {
        let display = path.display().to_string();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_path(path)
            .map_err(|e| GbrsError::Io {
                path: display.clone(),
                source: std::io::Error::other(e.to_string()),
            })?;

        let mut rows: Vec<Vec<String>> = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let record = record.map_err(|e| GbrsError::Parse {
                path: display.clone(),
                row: idx + 1,
                message: e.to_string(),
            })?;
            rows.push(record.iter().map(|s| s.trim().to_string()).collect());
        }
        if rows.is_empty() {
            return Err(GbrsError::EmptyFile(display));
        }

        let header = if options.has_header {
            Some(rows.remove(0))
        } else {
            None
        };
        if rows.is_empty() {
            return Err(GbrsError::EmptyFile(display));
        }

        let width = rows[0].len();
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(GbrsError::Parse {
                    path: display.clone(),
                    row: idx + 1 + options.has_header as usize,
                    message: format!("ragged row: expected {width} columns, found {}", row.len()),
                });
            }
        }

        let label_col = match options.label_column {
            LabelColumn::Last => width - 1,
            LabelColumn::Index(i) => {
                if i >= width {
                    return Err(GbrsError::Config(format!(
                        "label column {i} out of range (file has {width} columns)"
                    )));
                }
                i
            }
        };
        let condition_cols: Vec<usize> = (0..width).filter(|&c| c != label_col).collect();

        // Labels: first-appearance encoding, empty token is an error.
        let mut label_names: Vec<String> = Vec::new();
        let mut labels = Vec::with_capacity(rows.len());
        for (idx, row) in rows.iter().enumerate() {
            let token = &row[label_col];
            if token.is_empty() {
                return Err(GbrsError::Parse {
                    path: display.clone(),
                    row: idx + 1 + options.has_header as usize,
                    message: "empty label".into(),
                });
            }
            let id = match label_names.iter().position(|n| n == token) {
                Some(id) => id,
                None => {
                    label_names.push(token.clone());
                    label_names.len() - 1
                }
            };
            labels.push(id);
        }

        let mut raw = vec![vec![0.0; condition_cols.len()]; rows.len()];
        let mut attribute_meta = Vec::with_capacity(condition_cols.len());
        for (j, &col) in condition_cols.iter().enumerate() {
            let declared = options.declared_kinds.get(&col).copied();
            let all_numeric = rows.iter().all(|r| r[col].parse::<f64>().is_ok());
            let kind = declared.unwrap_or(if all_numeric {
                AttributeKind::Numeric
            } else {
                AttributeKind::Categorical
            });
            let mut categories: Vec<String> = Vec::new();
            for (idx, row) in rows.iter().enumerate() {
                let token = &row[col];
                if token.is_empty() {
                    return Err(GbrsError::Parse {
                        path: display.clone(),
                        row: idx + 1 + options.has_header as usize,
                        message: format!("missing value in column {col}"),
                    });
                }
                raw[idx][j] = match kind {
                    AttributeKind::Numeric => {
                        token.parse::<f64>().map_err(|_| GbrsError::Parse {
                            path: display.clone(),
                            row: idx + 1 + options.has_header as usize,
                            message: format!(
                                "non-numeric token {token:?} in numeric column {col}"
                            ),
                        })?
                    }
                    AttributeKind::Categorical => {
                        match categories.iter().position(|c| c == token) {
                            Some(code) => code as f64,
                            None => {
                                categories.push(token.clone());
                                (categories.len() - 1) as f64
                            }
                        }
                    }
                };
            }
            let (raw_min, raw_max) = column_range(&raw, j);
            let name = header
                .as_ref()
                .and_then(|h| h.get(col).cloned())
                .unwrap_or_else(|| format!("a{col}"));
            attribute_meta.push(AttributeMeta {
                name,
                kind,
                categories: (kind == AttributeKind::Categorical).then_some(categories),
                raw_min,
                raw_max,
            });
        }

        let values = raw.clone();
        Ok(Self {
            raw,
            values,
            labels,
            attribute_meta,
            label_names,
            normalized: false,
        })
    }

    /// Builds a system from an already-scaled matrix; values are trusted
    /// as-is and the system is marked normalized. Intended for programmatic
    /// construction in tests and fold views.
    pub fn from_normalized(values: Vec<Vec<f64>>, labels: Vec<usize>) -> Self {
        assert_eq!(values.len(), labels.len(), "row/label count mismatch");
        assert!(!values.is_empty(), "empty decision system");
        let d = values[0].len();
        assert!(values.iter().all(|r| r.len() == d), "ragged matrix");
        let attribute_meta = (0..d)
            .map(|j| {
                let (raw_min, raw_max) = column_range(&values, j);
                AttributeMeta {
                    name: format!("a{j}"),
                    kind: AttributeKind::Numeric,
                    categories: None,
                    raw_min,
                    raw_max,
                }
            })
            .collect();
        let num_labels = labels.iter().copied().max().unwrap_or(0) + 1;
        Self {
            raw: values.clone(),
            values,
            labels,
            attribute_meta,
            label_names: (0..num_labels).map(|l| l.to_string()).collect(),
            normalized: true,
        }
    }

    /// Min-max scales every column to `[0,1]` using the raw min/max recorded
    /// at load time. Constant columns map to all-zeros. Idempotent.
    pub fn normalize(&self) -> Self {
        let mut out = self.clone();
        for (j, meta) in self.attribute_meta.iter().enumerate() {
            let span = meta.raw_max - meta.raw_min;
            for (row, raw_row) in out.values.iter_mut().zip(&self.raw) {
                row[j] = if span > 0.0 {
                    (raw_row[j] - meta.raw_min) / span
                } else {
                    0.0
                };
            }
        }
        out.normalized = true;
        out
    }

    /// Scales one raw row with this system's min/max (e.g. a held-out query
    /// against a training fold's scaling).
    pub fn normalize_raw_row(&self, raw_row: &[f64]) -> Vec<f64> {
        assert_eq!(raw_row.len(), self.d(), "dimension mismatch");
        self.attribute_meta
            .iter()
            .zip(raw_row)
            .map(|(meta, &v)| {
                let span = meta.raw_max - meta.raw_min;
                if span > 0.0 {
                    (v - meta.raw_min) / span
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// A new system over the given rows only, re-normalized from those rows'
    /// raw values. Row `i` of the result is `ids[i]` of the original.
    pub fn restrict_rows(&self, ids: &[usize]) -> Self {
        assert!(!ids.is_empty(), "empty row selection");
        let raw: Vec<Vec<f64>> = ids.iter().map(|&i| self.raw[i].clone()).collect();
        let labels: Vec<usize> = ids.iter().map(|&i| self.labels[i]).collect();
        let mut attribute_meta = self.attribute_meta.clone();
        for (j, meta) in attribute_meta.iter_mut().enumerate() {
            let (raw_min, raw_max) = column_range(&raw, j);
            meta.raw_min = raw_min;
            meta.raw_max = raw_max;
        }
        let sub = Self {
            values: raw.clone(),
            raw,
            labels,
            attribute_meta,
            label_names: self.label_names.clone(),
            normalized: false,
        };
        sub.normalize()
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn d(&self) -> usize {
        self.attribute_meta.len()
    }

    /// Number of decision classes.
    pub fn num_classes(&self) -> usize {
        self.label_names.len()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    pub fn attribute_meta(&self) -> &[AttributeMeta] {
        &self.attribute_meta
    }

    pub fn attribute_names(&self, subset: &AttributeSubset) -> Vec<String> {
        subset
            .indexes()
            .iter()
            .map(|&j| self.attribute_meta[j].name.clone())
            .collect()
    }

    /// Working (normalized, once `normalize` has run) row.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    /// Encoded raw row.
    pub fn raw_row(&self, i: usize) -> &[f64] {
        &self.raw[i]
    }

    /// Row `i` projected onto the attribute subset.
    pub fn project(&self, subset: &AttributeSubset, i: usize) -> Vec<f64> {
        subset.indexes().iter().map(|&j| self.values[i][j]).collect()
    }

    /// Euclidean distance between row `i` restricted to `subset` and `point`.
    pub fn project_distance(&self, subset: &AttributeSubset, i: usize, point: &[f64]) -> f64 {
        assert_eq!(
            point.len(),
            subset.len(),
            "point length must equal subset size"
        );
        subset
            .indexes()
            .iter()
            .zip(point)
            .map(|(&j, &p)| {
                let v = self.values[i][j] - p;
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Euclidean distance between rows `i` and `j` on `subset`.
    pub fn row_distance(&self, subset: &AttributeSubset, i: usize, j: usize) -> f64 {
        subset
            .indexes()
            .iter()
            .map(|&a| {
                let v = self.values[i][a] - self.values[j][a];
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }
}

fn column_range(rows: &[Vec<f64>], j: usize) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for row in rows {
        min = min.min(row[j]);
        max = max.max(row[j]);
    }
    (min, max)
}
