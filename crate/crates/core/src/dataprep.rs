//! Loading, cleaning, encoding, scaling, splitting and correlation analysis for
//! the Cleveland heart-disease table.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_atomic;
use crate::seed::rng_from_seed;

pub const FEATURE_NAMES: [&str; 13] = [
    "age", "sex", "cp", "trestbps", "chol", "fbs", "restecg", "thalach", "exang", "oldpeak", "slope", "ca",
    "thal",
];
pub const TARGET_NAME: &str = "target";
pub const N_COLUMNS: usize = 14;
pub const MISSING: &str = "?";

/// Columns expanded by [`one_hot`]. The rest are kept as their numeric codes.
pub const CATEGORICAL: [&str; 5] = ["cp", "restecg", "slope", "ca", "thal"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRow {
    /// 1-based line number in the source file.
    pub line: usize,
    pub fields: Vec<String>,
}

/// Parsed but uninterpreted table: 13 feature fields plus the target per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub names: Vec<String>,
    pub rows: Vec<RawRow>,
}

fn looks_like_header(fields: &[String]) -> bool {
    fields
        .first()
        .is_some_and(|f| f != MISSING && f.parse::<f64>().is_err())
}

/// Parses comma-separated text with an optional header line.
pub fn parse_table(text: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut names: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<String> = record.iter().map(str::to_owned).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        if fields.len() != N_COLUMNS {
            return Err(Error::Parse {
                line,
                message: format!("expected {N_COLUMNS} fields, found {}", fields.len()),
            });
        }
        if names.is_none() && rows.is_empty() && looks_like_header(&fields) {
            names = Some(fields);
            continue;
        }
        rows.push(RawRow { line, fields });
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "table has no data rows".into(),
        });
    }
    let names = names.unwrap_or_else(|| {
        FEATURE_NAMES
            .iter()
            .copied()
            .chain(std::iter::once(TARGET_NAME))
            .map(str::to_owned)
            .collect()
    });
    Ok(RawTable { names, rows })
}

pub fn load_table(path: &Path) -> Result<RawTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_table(&text)
}

/// What to do with rows carrying a `"?"` cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    #[default]
    DropRows,
    /// Replace with the column's most frequent value (smallest on ties).
    ImputeMode,
}

/// Numeric feature matrix with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Vec<Vec<f64>>,
    pub y: Vec<u8>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    /// `[negatives, positives]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.y.iter().filter(|&&v| v == 1).count();
        [self.y.len() - pos, pos]
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            x: indices.iter().map(|&i| self.x[i].clone()).collect(),
            y: indices.iter().map(|&i| self.y[i]).collect(),
            feature_names: self.feature_names.clone(),
        }
    }

    pub fn with_features(&self, x: Vec<Vec<f64>>) -> Dataset {
        Dataset {
            x,
            y: self.y.clone(),
            feature_names: self.feature_names.clone(),
        }
    }
}

fn parse_cell(value: &str, line: usize, column: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("column '{column}': '{value}' is not a number"),
        })
}

fn column_modes(raw: &RawTable) -> Result<Vec<Option<f64>>> {
    (0..N_COLUMNS)
        .map(|j| {
            let mut counts: Vec<(f64, usize)> = Vec::new();
            for row in &raw.rows {
                let cell = &row.fields[j];
                if cell == MISSING {
                    continue;
                }
                let v = parse_cell(cell, row.line, &raw.names[j])?;
                match counts.iter_mut().find(|(k, _)| *k == v) {
                    Some((_, c)) => *c += 1,
                    None => counts.push((v, 1)),
                }
            }
            Ok(counts
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.total_cmp(&a.0)))
                .map(|(v, _)| v))
        })
        .collect()
}

/// Applies the missing-value policy, parses every feature as a real number and
/// binarizes the target (`> 0 → 1`).
pub fn clean(raw: &RawTable, policy: MissingPolicy) -> Result<Dataset> {
    let modes = match policy {
        MissingPolicy::ImputeMode => column_modes(raw)?,
        MissingPolicy::DropRows => Vec::new(),
    };
    let mut x = Vec::with_capacity(raw.rows.len());
    let mut y = Vec::with_capacity(raw.rows.len());
    for row in &raw.rows {
        let has_missing = row.fields.iter().any(|f| f == MISSING);
        if has_missing && policy == MissingPolicy::DropRows {
            continue;
        }
        let mut values = Vec::with_capacity(N_COLUMNS);
        for (j, cell) in row.fields.iter().enumerate() {
            let v = if cell == MISSING {
                modes[j].ok_or_else(|| {
                    Error::Data(format!("column '{}' has no observed values to impute from", raw.names[j]))
                })?
            } else {
                parse_cell(cell, row.line, &raw.names[j])?
            };
            values.push(v);
        }
        let target = values.pop().expect("14 columns");
        if target < 0.0 {
            return Err(Error::Parse {
                line: row.line,
                message: format!("negative target {target}"),
            });
        }
        x.push(values);
        y.push(u8::from(target > 0.0));
    }
    if y.is_empty() {
        return Err(Error::Data("no rows left after cleaning".into()));
    }
    Ok(Dataset {
        x,
        y,
        feature_names: raw.names[..N_COLUMNS - 1].to_vec(),
    })
}

/// Expands the [`CATEGORICAL`] columns into 0/1 indicator columns, one per
/// observed code, named `column=code`.
pub fn one_hot(ds: &Dataset) -> Dataset {
    let mut plan: Vec<(usize, Option<Vec<f64>>)> = Vec::new();
    let mut names = Vec::new();
    for (j, name) in ds.feature_names.iter().enumerate() {
        if CATEGORICAL.contains(&name.as_str()) {
            let codes: BTreeSet<u64> = ds.x.iter().map(|r| r[j].to_bits()).collect();
            let mut codes: Vec<f64> = codes.into_iter().map(f64::from_bits).collect();
            codes.sort_by(f64::total_cmp);
            names.extend(codes.iter().map(|c| format!("{name}={c}")));
            plan.push((j, Some(codes)));
        } else {
            names.push(name.clone());
            plan.push((j, None));
        }
    }
    let x = ds
        .x
        .iter()
        .map(|row| {
            let mut out = Vec::with_capacity(names.len());
            for (j, codes) in &plan {
                match codes {
                    Some(codes) => out.extend(codes.iter().map(|&c| if row[*j] == c { 1.0 } else { 0.0 })),
                    None => out.push(row[*j]),
                }
            }
            out
        })
        .collect();
    Dataset {
        x,
        y: ds.y.clone(),
        feature_names: names,
    }
}

/// Per-column mean and population standard deviation from training rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

const MIN_STD: f64 = 1e-12;

pub fn fit_standardizer(x: &[Vec<f64>], names: &[String]) -> Result<StandardizationStats> {
    let first = x.first().ok_or_else(|| Error::Data("cannot fit a standardizer on zero rows".into()))?;
    let width = first.len();
    let n = x.len() as f64;
    let mut mean = vec![0.0; width];
    for row in x {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; width];
    for row in x {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let std: Vec<f64> = var.into_iter().map(|s| (s / n).sqrt()).collect();
    if let Some(j) = std.iter().position(|&s| s <= MIN_STD) {
        let name = names.get(j).map_or_else(|| format!("#{j}"), Clone::clone);
        return Err(Error::config(format!("column '{name}' has zero variance")));
    }
    Ok(StandardizationStats { mean, std })
}

impl StandardizationStats {
    pub fn width(&self) -> usize {
        self.mean.len()
    }

    pub fn apply(&self, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        x.iter()
            .map(|row| {
                if row.len() != self.width() {
                    return Err(Error::Data(format!(
                        "row has {} features, standardizer expects {}",
                        row.len(),
                        self.width()
                    )));
                }
                Ok(row
                    .iter()
                    .zip(self.mean.iter().zip(&self.std))
                    .map(|(v, (m, s))| (v - m) / s)
                    .collect())
            })
            .collect()
    }

    pub fn invert(&self, z: &[Vec<f64>]) -> Vec<Vec<f64>> {
        z.iter()
            .map(|row| {
                row.iter()
                    .zip(self.mean.iter().zip(&self.std))
                    .map(|(v, (m, s))| v * s + m)
                    .collect()
            })
            .collect()
    }
}

pub fn apply_standardizer(stats: &StandardizationStats, x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    stats.apply(x)
}

/// Class-stratified shuffle split. Each class contributes
/// `round(train_fraction · class size)` rows to the training part; both parts
/// keep the original row order.
pub fn stratified_split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::config(format!("train fraction must be in (0, 1), got {train_fraction}")));
    }
    let mut rng = rng_from_seed(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [0u8, 1] {
        let mut idx: Vec<usize> = (0..ds.len()).filter(|&i| ds.y[i] == class).collect();
        if idx.len() < 2 {
            return Err(Error::config(format!(
                "class {class} has {} member(s); stratified split needs at least 2",
                idx.len()
            )));
        }
        idx.shuffle(&mut rng);
        let k = (train_fraction * idx.len() as f64).round() as usize;
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((ds.subset(&train), ds.subset(&test)))
}

/// Standardized train/test parts with the statistics fitted on the training part.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub stats: StandardizationStats,
}

/// Stratified split followed by standardization fitted on the training rows only.
pub fn prepare_split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<PreparedSplit> {
    let (train, test) = stratified_split(ds, train_fraction, seed)?;
    let stats = fit_standardizer(&train.x, &train.feature_names)?;
    Ok(PreparedSplit {
        train: train.with_features(stats.apply(&train.x)?),
        test: test.with_features(stats.apply(&test.x)?),
        stats,
    })
}

/// Sample Pearson correlation of two equally long columns.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::domain("pearson needs two non-empty columns of equal length"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain("pearson is undefined for a constant column"));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrMatrix {
    pub names: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// Pairwise Pearson correlations of all features (and optionally the target).
pub fn pearson_corr_matrix(ds: &Dataset, include_target: bool) -> Result<CorrMatrix> {
    let mut names = ds.feature_names.clone();
    let mut columns: Vec<Vec<f64>> = (0..ds.n_features())
        .map(|j| ds.x.iter().map(|r| r[j]).collect())
        .collect();
    if include_target {
        names.push(TARGET_NAME.to_owned());
        columns.push(ds.y.iter().map(|&v| f64::from(v)).collect());
    }
    for (name, col) in names.iter().zip(&columns) {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(Error::Data(format!("column '{name}' is constant; correlation undefined")));
        }
    }
    let k = columns.len();
    let mut values = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r = pearson(&columns[i], &columns[j])?;
            values[i][j] = r;
            values[j][i] = r;
        }
    }
    Ok(CorrMatrix { names, values })
}

pub fn render_corr_csv(m: &CorrMatrix) -> String {
    let mut out = String::from("name");
    for n in &m.names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (name, row) in m.names.iter().zip(&m.values) {
        out.push_str(name);
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn render_dataset_csv(ds: &Dataset) -> String {
    let mut out = ds.feature_names.join(",");
    out.push(',');
    out.push_str(TARGET_NAME);
    out.push('\n');
    for (row, y) in ds.x.iter().zip(&ds.y) {
        for v in row {
            let _ = write!(out, "{v},");
        }
        let _ = writeln!(out, "{y}");
    }
    out
}

pub fn write_dataset_csv(ds: &Dataset, path: &Path) -> Result<()> {
    write_atomic(path, render_dataset_csv(ds).as_bytes())
}

pub fn write_corr_csv(m: &CorrMatrix, path: &Path) -> Result<()> {
    write_atomic(path, render_corr_csv(m).as_bytes())
}
