//! Dataset ingestion, missing-row deletion, discretization and standardization.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell strings treated as missing.
pub const MISSING_MARKERS: &[&str] = &["", "NA", "NaN", "[Not Available]", "[Unknown]"];

/// Columns with at most this many distinct values are inferred as binary.
pub const BINARY_MAX_DISTINCT: usize = 2;
/// Integer-valued columns with at most this many distinct values are categorical.
pub const CATEGORICAL_MAX_DISTINCT: usize = 12;
/// Default number of equal-frequency bins for continuous columns.
pub const DEFAULT_BINS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColumnKind {
    Binary,
    Categorical,
    Continuous,
}

impl fmt::Display for ColumnKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ColumnKind::Binary => "binary",
            ColumnKind::Categorical => "categorical",
            ColumnKind::Continuous => "continuous",
        };
        f.write_str(s)
    }
}

impl FromStr for ColumnKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "binary" => Ok(ColumnKind::Binary),
            "categorical" => Ok(ColumnKind::Categorical),
            "continuous" => Ok(ColumnKind::Continuous),
            other => Err(Error::Schema(format!("unknown column kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub index: usize,
    pub name: String,
    pub kind: ColumnKind,
}

/// Parse a schema document: one `index,name,kind` line per column.
///
/// Blank lines and lines starting with `#` are ignored. Indices must be
/// contiguous from 0 and names unique.
pub fn parse_schema(text: &str) -> Result<Vec<ColumnSpec>> {
    let mut specs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Schema(format!(
                "line {}: expected `index,name,kind`, got {line:?}",
                lineno + 1
            )));
        }
        let index = parts[0].parse::<usize>().map_err(|_| {
            Error::Schema(format!("line {}: bad index {:?}", lineno + 1, parts[0]))
        })?;
        specs.push(ColumnSpec {
            index,
            name: parts[1].to_string(),
            kind: parts[2].parse()?,
        });
    }
    validate_specs(&specs)?;
    Ok(specs)
}

pub fn load_schema(path: impl AsRef<Path>) -> Result<Vec<ColumnSpec>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_schema(&text)
}

pub fn format_schema(specs: &[ColumnSpec]) -> String {
    let mut out = String::new();
    for s in specs {
        out.push_str(&format!("{},{},{}\n", s.index, s.name, s.kind));
    }
    out
}

fn validate_specs(specs: &[ColumnSpec]) -> Result<()> {
    let mut names = std::collections::HashSet::new();
    for (i, s) in specs.iter().enumerate() {
        if s.index != i {
            return Err(Error::Schema(format!(
                "column indices must be contiguous from 0; position {i} has index {}",
                s.index
            )));
        }
        if !names.insert(s.name.as_str()) {
            return Err(Error::Schema(format!("duplicate column name {:?}", s.name)));
        }
    }
    Ok(())
}

/// A rectangular feature table with integer class labels.
///
/// Missing feature cells are stored as `NaN`; a missing label is tracked in a
/// separate mask. Both disappear after [`Dataset::drop_missing`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<ColumnSpec>,
    values: Vec<f64>,
    labels: Vec<usize>,
    label_missing: Vec<bool>,
    class_count: usize,
    label_name: String,
    class_values: Vec<f64>,
}

impl Dataset {
    /// Build a dataset from row-major values and labels already coded `0..C`.
    ///
    /// Every class in `0..=max(label)` must occur at least once.
    pub fn new(columns: Vec<ColumnSpec>, rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        validate_specs(&columns)?;
        if rows.len() != labels.len() {
            return Err(Error::contract(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let nf = columns.len();
        let mut values = Vec::with_capacity(rows.len() * nf);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != nf {
                return Err(Error::contract(format!(
                    "row {i} has {} values, expected {nf}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        let class_count = labels.iter().max().map_or(0, |m| m + 1);
        let ds = Dataset {
            label_missing: vec![false; labels.len()],
            class_values: (0..class_count).map(|c| c as f64).collect(),
            columns,
            values,
            labels,
            class_count,
            label_name: "label".to_string(),
        };
        ds.check_classes()?;
        ds.check_binary()?;
        Ok(ds)
    }

    /// Like [`Dataset::new`] but with generated names `f0, f1, ...` and inferred kinds.
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        let nf = rows.first().map_or(0, Vec::len);
        let columns = (0..nf)
            .map(|j| ColumnSpec {
                index: j,
                name: format!("f{j}"),
                kind: infer_kind(rows.iter().map(|r| r.get(j).copied().unwrap_or(f64::NAN))),
            })
            .collect();
        Self::new(columns, rows, labels)
    }

    fn check_classes(&self) -> Result<()> {
        let mut seen = vec![false; self.class_count];
        for (i, &l) in self.labels.iter().enumerate() {
            if !self.label_missing[i] {
                seen[l] = true;
            }
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::Schema(format!("class {c} has no samples")));
        }
        Ok(())
    }

    fn check_binary(&self) -> Result<()> {
        for spec in &self.columns {
            if spec.kind == ColumnKind::Binary {
                let distinct = distinct_sorted(self.column_iter(spec.index));
                if distinct.len() > 2 {
                    return Err(Error::Schema(format!(
                        "binary column {:?} has {} distinct values",
                        spec.name,
                        distinct.len()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.columns.len()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label_name(&self) -> &str {
        &self.label_name
    }

    /// Original label value for each class code.
    pub fn class_values(&self) -> &[f64] {
        &self.class_values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let nf = self.n_features();
        &self.values[i * nf..(i + 1) * nf]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_features() + col]
    }

    pub fn column_iter(&self, col: usize) -> impl Iterator<Item = f64> + '_ {
        let nf = self.n_features();
        self.values.iter().skip(col).step_by(nf.max(1)).copied()
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.column_iter(col).collect()
    }

    /// Rows `rows` restricted to the columns `features`, in the given orders.
    pub fn select(&self, rows: &[usize], features: &[usize]) -> Vec<Vec<f64>> {
        rows.iter()
            .map(|&i| features.iter().map(|&f| self.value(i, f)).collect())
            .collect()
    }

    pub fn row_has_missing(&self, i: usize) -> bool {
        self.label_missing[i] || self.row(i).iter().any(|v| v.is_nan())
    }

    pub fn missing_row_count(&self) -> usize {
        (0..self.n_rows()).filter(|&i| self.row_has_missing(i)).count()
    }

    /// Keep only rows without missing cells, preserving order.
    ///
    /// Class codes are re-compacted if a class disappears with the dropped rows.
    pub fn drop_missing(&self) -> Result<Dataset> {
        let keep: Vec<usize> = (0..self.n_rows())
            .filter(|&i| !self.row_has_missing(i))
            .collect();
        if keep.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if keep.len() == self.n_rows() {
            return Ok(self.clone());
        }
        let mut present = vec![false; self.class_count];
        for &i in &keep {
            present[self.labels[i]] = true;
        }
        let mut remap = vec![usize::MAX; self.class_count];
        let mut class_values = Vec::new();
        for (c, &p) in present.iter().enumerate() {
            if p {
                remap[c] = class_values.len();
                class_values.push(self.class_values[c]);
            }
        }
        let nf = self.n_features();
        let mut values = Vec::with_capacity(keep.len() * nf);
        for &i in &keep {
            values.extend_from_slice(self.row(i));
        }
        Ok(Dataset {
            columns: self.columns.clone(),
            values,
            labels: keep.iter().map(|&i| remap[self.labels[i]]).collect(),
            label_missing: vec![false; keep.len()],
            class_count: class_values.len(),
            label_name: self.label_name.clone(),
            class_values,
        })
    }

    /// Subset of rows, keeping the class coding of `self`.
    pub fn subset_rows(&self, rows: &[usize]) -> Dataset {
        let nf = self.n_features();
        let mut values = Vec::with_capacity(rows.len() * nf);
        for &i in rows {
            values.extend_from_slice(self.row(i));
        }
        Dataset {
            columns: self.columns.clone(),
            values,
            labels: rows.iter().map(|&i| self.labels[i]).collect(),
            label_missing: rows.iter().map(|&i| self.label_missing[i]).collect(),
            class_count: self.class_count,
            label_name: self.label_name.clone(),
            class_values: self.class_values.clone(),
        }
    }

    /// Replace the feature values, keeping columns and labels.
    pub fn with_values(&self, rows: Vec<Vec<f64>>) -> Result<Dataset> {
        if rows.len() != self.n_rows() || rows.iter().any(|r| r.len() != self.n_features()) {
            return Err(Error::contract("replacement values have the wrong shape"));
        }
        let mut out = self.clone();
        out.values = rows.into_iter().flatten().collect();
        Ok(out)
    }

    /// Equal-frequency discretization of continuous columns; see [`discretize`].
    pub fn discretize(&self, bins: usize) -> DiscretizedView {
        discretize(self, bins)
    }

    /// Z-score every column, returning the fitted transform alongside.
    pub fn standardize(&self) -> (Dataset, Standardizer) {
        let st = Standardizer::fit(self);
        let out = st.transform_dataset(self);
        (out, st)
    }

    /// Write as CSV with a header row; the label is the last column and
    /// missing cells are written as `NA`.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        let mut header: Vec<String> = self.columns.iter().map(|c| c.name.clone()).collect();
        header.push(self.label_name.clone());
        w.write_record(&header).map_err(|e| csv_io(path, e))?;
        for i in 0..self.n_rows() {
            let mut rec: Vec<String> = self.row(i).iter().map(|v| format_cell(*v)).collect();
            rec.push(if self.label_missing[i] {
                "NA".to_string()
            } else {
                format_cell(self.class_values[self.labels[i]])
            });
            w.write_record(&rec).map_err(|e| csv_io(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
        Ok(())
    }
}

fn format_cell(v: f64) -> String {
    if v.is_nan() {
        "NA".to_string()
    } else {
        format!("{v}")
    }
}

fn csv_io(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Parse {
            row: 0,
            message: format!("{other:?}"),
        },
    }
}

fn distinct_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.filter(|x| !x.is_nan()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Infer a column kind from its non-missing values.
pub fn infer_kind(values: impl Iterator<Item = f64>) -> ColumnKind {
    let distinct = distinct_sorted(values);
    if distinct.len() <= BINARY_MAX_DISTINCT {
        ColumnKind::Binary
    } else if distinct.len() <= CATEGORICAL_MAX_DISTINCT && distinct.iter().all(|v| v.fract() == 0.0)
    {
        ColumnKind::Categorical
    } else {
        ColumnKind::Continuous
    }
}

pub fn is_missing_marker(cell: &str) -> bool {
    MISSING_MARKERS.contains(&cell)
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Header name of the class column; the last column when `None`.
    pub label_column: Option<String>,
    /// Explicit column specs for the feature columns, in file order.
    pub schema: Option<Vec<ColumnSpec>>,
}

/// Load a CSV file with a mandatory header row.
pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, opts)
}

/// Parse CSV text; see [`load_csv`].
pub fn parse_csv(text: &str, opts: &LoadOptions) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let header = match records.next() {
        None => return Err(Error::EmptyInput("file has no header row".into())),
        Some(rec) => rec.map_err(|e| Error::Parse {
            row: 1,
            message: e.to_string(),
        })?,
    };
    let header: Vec<String> = header.iter().map(str::to_string).collect();
    if header.len() < 2 {
        return Err(Error::Schema(
            "need at least one feature column and a label column".into(),
        ));
    }
    let label_idx = match &opts.label_column {
        None => header.len() - 1,
        Some(name) => header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("label column {name:?} not in header")))?,
    };

    let ncols = header.len();
    let mut raw: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<Option<f64>> = Vec::new();
    for (k, rec) in records.enumerate() {
        // 1-based file line, header is line 1
        let row_no = k + 2;
        let rec = rec.map_err(|e| Error::Parse {
            row: row_no,
            message: e.to_string(),
        })?;
        if rec.len() == 1 && rec.get(0) == Some("") {
            continue;
        }
        if rec.len() != ncols {
            return Err(Error::Parse {
                row: row_no,
                message: format!("expected {ncols} fields, found {}", rec.len()),
            });
        }
        let mut row = Vec::with_capacity(ncols - 1);
        let mut label = None;
        for (j, cell) in rec.iter().enumerate() {
            if j == label_idx {
                if !is_missing_marker(cell) {
                    label = Some(cell.parse::<f64>().map_err(|_| {
                        Error::Schema(format!("row {row_no}: non-numeric label {cell:?}"))
                    })?);
                }
                continue;
            }
            let v = if is_missing_marker(cell) {
                f64::NAN
            } else {
                cell.parse::<f64>().map_err(|_| Error::Parse {
                    row: row_no,
                    message: format!("non-numeric value {cell:?} in column {:?}", header[j]),
                })?
            };
            row.push(v);
        }
        raw.push(row);
        raw_labels.push(label);
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput("no data rows".into()));
    }

    let feature_names: Vec<&String> = header
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != label_idx)
        .map(|(_, h)| h)
        .collect();
    let columns = match &opts.schema {
        Some(schema) => {
            if schema.len() != feature_names.len() {
                return Err(Error::Schema(format!(
                    "schema lists {} columns but the file has {} feature columns",
                    schema.len(),
                    feature_names.len()
                )));
            }
            schema.clone()
        }
        None => feature_names
            .iter()
            .enumerate()
            .map(|(j, name)| ColumnSpec {
                index: j,
                name: (*name).clone(),
                kind: infer_kind(raw.iter().map(|r| r[j])),
            })
            .collect(),
    };
    validate_specs(&columns)?;

    let class_values = distinct_sorted(raw_labels.iter().flatten().copied());
    if class_values.is_empty() {
        return Err(Error::Schema("label column has no values".into()));
    }
    let code_of: BTreeMap<u64, usize> = class_values
        .iter()
        .enumerate()
        .map(|(c, v)| (v.to_bits(), c))
        .collect();
    let labels = raw_labels
        .iter()
        .map(|l| l.map_or(0, |v| code_of[&v.to_bits()]))
        .collect();
    let label_missing = raw_labels.iter().map(Option::is_none).collect();

    let ds = Dataset {
        values: raw.into_iter().flatten().collect(),
        labels,
        label_missing,
        class_count: class_values.len(),
        label_name: header[label_idx].clone(),
        class_values,
        columns,
    };
    ds.check_binary()?;
    Ok(ds)
}

/// Integer codes per column, ready for plug-in information estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedView {
    /// `codes[j][i]` is the code of row `i` in column `j`.
    pub codes: Vec<Vec<u32>>,
    /// Ascending lower edges of bins `1..` for continuous columns, `None` otherwise.
    pub bin_edges: Vec<Option<Vec<f64>>>,
    pub cardinalities: Vec<usize>,
}

impl DiscretizedView {
    pub fn n_features(&self) -> usize {
        self.codes.len()
    }

    pub fn n_rows(&self) -> usize {
        self.codes.first().map_or(0, Vec::len)
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.codes[j]
    }
}

/// Equal-frequency bin edges for one column.
///
/// Candidate cut points are the order statistics at `k·n/bins`; duplicates and
/// cuts at the column minimum are dropped, so fewer than `bins` bins may result.
pub fn equal_frequency_edges(values: &[f64], bins: usize) -> Vec<f64> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    if sorted.is_empty() || bins < 2 {
        return Vec::new();
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let min = sorted[0];
    let mut edges: Vec<f64> = (1..bins)
        .map(|k| sorted[(k * n / bins).min(n - 1)])
        .filter(|&e| e > min)
        .collect();
    edges.dedup();
    edges
}

fn bin_code(edges: &[f64], v: f64) -> u32 {
    edges.partition_point(|&e| e <= v) as u32
}

/// Discretize every column.
///
/// Continuous columns are cut into at most `bins` equal-frequency bins; binary
/// and categorical columns are coded by the rank of their distinct value.
/// Missing values (if any remain) are coded 0.
pub fn discretize(d: &Dataset, bins: usize) -> DiscretizedView {
    let bins = bins.max(2);
    let mut codes = Vec::with_capacity(d.n_features());
    let mut bin_edges = Vec::with_capacity(d.n_features());
    let mut cardinalities = Vec::with_capacity(d.n_features());
    for spec in d.columns() {
        let col = d.column(spec.index);
        match spec.kind {
            ColumnKind::Continuous => {
                let edges = equal_frequency_edges(&col, bins);
                codes.push(
                    col.iter()
                        .map(|&v| if v.is_nan() { 0 } else { bin_code(&edges, v) })
                        .collect(),
                );
                cardinalities.push(edges.len() + 1);
                bin_edges.push(Some(edges));
            }
            ColumnKind::Binary | ColumnKind::Categorical => {
                let distinct = distinct_sorted(col.iter().copied());
                codes.push(
                    col.iter()
                        .map(|&v| {
                            if v.is_nan() {
                                0
                            } else {
                                distinct.partition_point(|&x| x < v) as u32
                            }
                        })
                        .collect(),
                );
                cardinalities.push(distinct.len().max(1));
                bin_edges.push(None);
            }
        }
    }
    DiscretizedView {
        codes,
        bin_edges,
        cardinalities,
    }
}

/// Per-column z-score transform. Population variance; zero-variance columns map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    pub fn fit(d: &Dataset) -> Self {
        let rows: Vec<usize> = (0..d.n_rows()).collect();
        Self::fit_rows(d, &rows, &(0..d.n_features()).collect::<Vec<_>>())
    }

    /// Fit on the given rows and columns only (e.g. a training split).
    pub fn fit_rows(d: &Dataset, rows: &[usize], features: &[usize]) -> Self {
        let selected = d.select(rows, features);
        Self::fit_matrix(&selected, features.len())
    }

    pub fn fit_matrix(rows: &[Vec<f64>], width: usize) -> Self {
        let n = rows.len() as f64;
        let mut means = vec![0.0; width];
        let mut stds = vec![0.0; width];
        if rows.is_empty() {
            return Standardizer { means, stds };
        }
        for j in 0..width {
            let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n;
            let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / n;
            means[j] = mean;
            stds[j] = var.sqrt();
        }
        Standardizer { means, stds }
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }

    pub fn transform(&self, rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| self.transform_row(r)).collect()
    }

    pub fn transform_dataset(&self, d: &Dataset) -> Dataset {
        let rows = d.rows().map(|r| self.transform_row(r)).collect();
        // shapes match by construction
        d.with_values(rows).expect("standardizer width matches dataset")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> LoadOptions {
        LoadOptions::default()
    }

    #[test]
    fn minimal_csv_loads() {
        let d = parse_csv("a,b,y\n1,2,0\n3,4,1\n5,6,0\n", &opts()).unwrap();
        assert_eq!(d.n_rows(), 3);
        assert_eq!(d.n_features(), 2);
        assert_eq!(d.class_count(), 2);
        assert_eq!(d.labels(), &[0, 1, 0]);
        assert_eq!(d.label_name(), "y");
    }

    #[test]
    fn label_column_by_name() {
        let d = parse_csv(
            "stage,a,b\n2,1,2\n4,3,4\n",
            &LoadOptions {
                label_column: Some("stage".into()),
                schema: None,
            },
        )
        .unwrap();
        assert_eq!(d.labels(), &[0, 1]);
        assert_eq!(d.class_values(), &[2.0, 4.0]);
        assert_eq!(d.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn missing_markers_are_flagged() {
        let d = parse_csv(
            "a,b,y\n1,[Not Available],0\nNA,2,1\n3,4,1\n5,6,NA\n",
            &opts(),
        )
        .unwrap();
        assert_eq!(d.n_rows(), 4);
        assert!(d.value(0, 1).is_nan());
        assert_eq!(d.missing_row_count(), 3);
        let clean = d.drop_missing().unwrap();
        assert_eq!(clean.n_rows(), 1);
        assert_eq!(clean.row(0), &[3.0, 4.0]);
        // only class "1" survives and is recoded to 0
        assert_eq!(clean.class_count(), 1);
        assert_eq!(clean.class_values(), &[1.0]);
    }

    #[test]
    fn ragged_row_reports_line() {
        match parse_csv("a,b,y\n1,2,0\n1,2\n", &opts()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_numeric_label_is_schema_error() {
        assert!(matches!(
            parse_csv("a,y\n1,stage1\n", &opts()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn empty_file_is_input_error() {
        assert!(matches!(parse_csv("", &opts()), Err(Error::EmptyInput(_))));
        assert!(matches!(parse_csv("a,y\n", &opts()), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn kind_inference_thresholds() {
        assert_eq!(infer_kind([0.0, 1.0, 1.0].into_iter()), ColumnKind::Binary);
        assert_eq!(
            infer_kind((0..12).map(f64::from)),
            ColumnKind::Categorical
        );
        assert_eq!(
            infer_kind((0..13).map(f64::from)),
            ColumnKind::Continuous
        );
        assert_eq!(
            infer_kind([0.5, 1.5, 2.5].into_iter()),
            ColumnKind::Continuous
        );
    }

    #[test]
    fn schema_rejects_gaps_and_duplicates() {
        assert!(parse_schema("0,a,binary\n2,b,binary\n").is_err());
        assert!(parse_schema("0,a,binary\n1,a,binary\n").is_err());
        assert!(parse_schema("0,a,ordinal\n").is_err());
        let s = parse_schema("# c\n0,a,binary\n\n1,b,continuous\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(parse_schema(&format_schema(&s)).unwrap(), s);
    }

    #[test]
    fn schema_width_must_match() {
        let schema = parse_schema("0,a,continuous\n").unwrap();
        let r = parse_csv(
            "a,b,y\n1,2,0\n",
            &LoadOptions {
                label_column: None,
                schema: Some(schema),
            },
        );
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn binary_schema_with_three_values_rejected() {
        let schema = parse_schema("0,a,binary\n").unwrap();
        let r = parse_csv(
            "a,y\n1,0\n2,1\n3,0\n",
            &LoadOptions {
                label_column: None,
                schema: Some(schema),
            },
        );
        assert!(matches!(r, Err(Error::Schema(_))));
    }

    #[test]
    fn drop_missing_counts_and_identity() {
        let d = parse_csv(
            "a,b,y\n1,2,0\nNA,2,1\n3,4,1\n5,,0\n7,8,1\n",
            &opts(),
        )
        .unwrap();
        let clean = d.drop_missing().unwrap();
        assert_eq!(clean.n_rows(), 3);
        assert_eq!(clean.drop_missing().unwrap(), clean);
    }

    #[test]
    fn drop_missing_all_rows_errors() {
        let d = parse_csv("a,y\nNA,0\n[Unknown],1\n", &opts()).unwrap();
        assert!(matches!(d.drop_missing(), Err(Error::EmptyDataset)));
    }

    #[test]
    fn equal_frequency_on_one_to_hundred() {
        let rows: Vec<Vec<f64>> = (1..=100).map(|v| vec![f64::from(v)]).collect();
        let labels = (0..100).map(|i| i % 2).collect();
        let d = Dataset::from_rows(rows, labels).unwrap();
        let view = d.discretize(4);
        assert_eq!(view.cardinalities[0], 4);
        for c in 0..4u32 {
            assert_eq!(view.codes[0].iter().filter(|&&x| x == c).count(), 25);
        }
    }

    #[test]
    fn constant_column_single_code() {
        let d = Dataset::from_rows(vec![vec![3.0]; 10], (0..10).map(|i| i % 2).collect()).unwrap();
        let view = d.discretize(4);
        assert_eq!(view.cardinalities[0], 1);
        assert!(view.codes[0].iter().all(|&c| c == 0));
    }

    #[test]
    fn duplicate_quantile_edges_merge() {
        // order statistics at 2,4,6 of [1,1,1,1,2,3,4,5] are 1,2,4; the cut at
        // the minimum is dropped, leaving edges [2,4] and three bins
        let col = [1.0, 1.0, 1.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(equal_frequency_edges(&col, 4), vec![2.0, 4.0]);
        let spec = vec![ColumnSpec {
            index: 0,
            name: "x".into(),
            kind: ColumnKind::Continuous,
        }];
        let d = Dataset::new(
            spec,
            col.iter().map(|&v| vec![v]).collect(),
            vec![0, 1, 0, 1, 0, 1, 0, 1],
        )
        .unwrap();
        let view = d.discretize(4);
        assert_eq!(view.cardinalities[0], 3);
        assert_eq!(view.codes[0], vec![0, 0, 0, 0, 1, 1, 2, 2]);
    }

    #[test]
    fn categorical_codes_by_sorted_value() {
        let d = Dataset::from_rows(
            vec![vec![5.0], vec![1.0], vec![3.0], vec![1.0]],
            vec![0, 1, 0, 1],
        )
        .unwrap();
        assert_eq!(d.columns()[0].kind, ColumnKind::Categorical);
        let view = d.discretize(8);
        assert_eq!(view.codes[0], vec![2, 0, 1, 0]);
        assert_eq!(view.cardinalities[0], 3);
        assert!(view.bin_edges[0].is_none());
    }

    #[test]
    fn standardize_examples() {
        let d = Dataset::from_rows(
            vec![
                vec![0.0, 7.0, 1.0],
                vec![2.0, 7.0, 2.0],
                vec![0.0, 7.0, 3.0],
                vec![2.0, 7.0, 4.0],
            ],
            vec![0, 1, 0, 1],
        )
        .unwrap();
        let (s, st) = d.standardize();
        assert_eq!(s.column(0), vec![-1.0, 1.0, -1.0, 1.0]);
        assert_eq!(s.column(1), vec![0.0; 4]);
        let c = s.column(2);
        let mean = c.iter().sum::<f64>() / 4.0;
        let var = c.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-12);
        assert!((var - 1.0).abs() < 1e-12);
        assert_eq!(st.means[2], 2.5);
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        let d = parse_csv("a,b,y\n0.1,2.5e-3,3\n-4.25,NA,5\n", &opts()).unwrap();
        d.write_csv(&p).unwrap();
        let back = load_csv(&p, &opts()).unwrap();
        assert_eq!(back.n_rows(), 2);
        assert_eq!(back.value(0, 0), 0.1);
        assert_eq!(back.value(0, 1), 2.5e-3);
        assert!(back.value(1, 1).is_nan());
        assert_eq!(back.class_values(), d.class_values());
        assert_eq!(back.labels(), d.labels());
    }
}
