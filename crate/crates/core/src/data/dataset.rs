use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{AnfisError, Result};

/// Immutable table of input rows and one target column.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    input_names: Vec<String>,
    target_name: String,
    /// Row-major `len() x n_inputs()`.
    inputs: Vec<f64>,
    targets: Vec<f64>,
}

impl Dataset {
    pub fn new(
        input_names: Vec<String>,
        target_name: impl Into<String>,
        inputs: Vec<f64>,
        targets: Vec<f64>,
    ) -> Result<Self> {
        let n = input_names.len();
        if n == 0 {
            return Err(AnfisError::Config("dataset needs at least one input column".into()));
        }
        if inputs.len() != targets.len() * n {
            return Err(AnfisError::Shape(format!(
                "{} input values for {} rows of {n} columns",
                inputs.len(),
                targets.len()
            )));
        }
        if inputs.iter().chain(&targets).any(|v| !v.is_finite()) {
            return Err(AnfisError::Numeric("dataset contains non-finite values".into()));
        }
        Ok(Dataset {
            input_names,
            target_name: target_name.into(),
            inputs,
            targets,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn n_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    pub fn inputs(&self) -> &[f64] {
        &self.inputs
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n_inputs();
        &self.inputs[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.inputs
            .chunks(self.n_inputs())
            .zip(self.targets.iter().copied())
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.inputs.iter().skip(j).step_by(self.n_inputs()).copied().collect()
    }

    /// `(name, min, max)` of each input column; a constant column is widened by 0.5 each side.
    pub fn input_ranges(&self) -> Result<Vec<(String, f64, f64)>> {
        if self.is_empty() {
            return Err(AnfisError::Config("cannot take ranges of an empty dataset".into()));
        }
        Ok(self
            .input_names
            .iter()
            .enumerate()
            .map(|(j, name)| {
                let col = self.column(j);
                let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if hi > lo {
                    (name.clone(), lo, hi)
                } else {
                    (name.clone(), lo - 0.5, hi + 0.5)
                }
            })
            .collect())
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        let n = self.n_inputs();
        let mut inputs = Vec::with_capacity(indices.len() * n);
        let mut targets = Vec::with_capacity(indices.len());
        for &i in indices {
            inputs.extend_from_slice(self.row(i));
            targets.push(self.targets[i]);
        }
        Dataset {
            input_names: self.input_names.clone(),
            target_name: self.target_name.clone(),
            inputs,
            targets,
        }
    }

    /// Contiguous row range `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> Result<Dataset> {
        if start > end || end > self.len() {
            return Err(AnfisError::Config(format!(
                "row range {start}..{end} outside dataset of {} rows",
                self.len()
            )));
        }
        Ok(self.select(&(start..end).collect::<Vec<_>>()))
    }

    /// Rows permuted by [`shuffle_indices`].
    pub fn shuffled(&self, seed: u64) -> Dataset {
        self.select(&shuffle_indices(self.len(), seed))
    }

    /// Row-wise concatenation; column names must agree.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset> {
        if self.input_names != other.input_names || self.target_name != other.target_name {
            return Err(AnfisError::Shape("datasets have different columns".into()));
        }
        let mut out = self.clone();
        out.inputs.extend_from_slice(&other.inputs);
        out.targets.extend_from_slice(&other.targets);
        Ok(out)
    }

    /// Writes a header row of input names then the target name.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
        let header = self.input_names.iter().map(String::as_str).chain([self.target_name.as_str()]);
        w.write_record(header).map_err(|e| AnfisError::csv(path, e))?;
        for (row, y) in self.rows() {
            let fields = row.iter().chain([&y]).map(|v| v.to_string());
            w.write_record(fields).map_err(|e| AnfisError::csv(path, e))?;
        }
        w.flush().map_err(|e| AnfisError::io(path, e))
    }
}

/// Seeded Fisher-Yates permutation of `0..len`.
///
/// The generator is ChaCha8 seeded with `seed`; step `i` (from `len - 1`
/// down to 1) swaps position `i` with a uniform draw from `0..=i`.
pub fn shuffle_indices(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx
}

/// Shuffles with `seed` and cuts after `floor(train_fraction * len)` rows.
pub fn split(ds: &Dataset, train_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(AnfisError::Config(format!(
            "train fraction {train_fraction} must lie strictly between 0 and 1"
        )));
    }
    if ds.is_empty() {
        return Err(AnfisError::Config("cannot split an empty dataset".into()));
    }
    let idx = shuffle_indices(ds.len(), seed);
    let cut = (train_fraction * ds.len() as f64).floor() as usize;
    Ok((ds.select(&idx[..cut]), ds.select(&idx[cut..])))
}

/// Reads the named columns of a headed CSV file.
pub fn load_csv(path: impl AsRef<Path>, input_columns: &[String], target_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let (mut columns, rows) = read_columns(path, input_columns.iter().map(String::as_str).chain([target_column]))?;
    let targets = columns.pop().unwrap_or_default();
    let n = input_columns.len();
    let mut inputs = Vec::with_capacity(rows * n);
    for r in 0..rows {
        inputs.extend(columns.iter().map(|c| c[r]));
    }
    Dataset::new(input_columns.to_vec(), target_column, inputs, targets)
}

/// Reads only the named input columns, row-major.
pub fn load_inputs_csv(path: impl AsRef<Path>, input_columns: &[String]) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let (columns, rows) = read_columns(path, input_columns.iter().map(String::as_str))?;
    let mut inputs = Vec::with_capacity(rows * input_columns.len());
    for r in 0..rows {
        inputs.extend(columns.iter().map(|c| c[r]));
    }
    Ok(inputs)
}

fn read_columns<'a>(
    path: &Path,
    names: impl Iterator<Item = &'a str>,
) -> Result<(Vec<Vec<f64>>, usize)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| AnfisError::csv(path, e))?;
    let header = reader.headers().map_err(|e| AnfisError::csv(path, e))?.clone();
    let wanted: Vec<(&str, usize)> = names
        .map(|name| {
            header
                .iter()
                .position(|h| h == name)
                .map(|i| (name, i))
                .ok_or_else(|| AnfisError::MissingColumn {
                    path: path.to_path_buf(),
                    column: name.to_string(),
                })
        })
        .collect::<Result<_>>()?;

    let mut columns = vec![Vec::new(); wanted.len()];
    let mut rows = 0;
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| AnfisError::csv(path, e))?;
        for ((name, i), col) in wanted.iter().zip(columns.iter_mut()) {
            let raw = record.get(*i).unwrap_or("");
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => col.push(v),
                _ => {
                    return Err(AnfisError::BadCell {
                        path: path.to_path_buf(),
                        row: k + 1,
                        column: name.to_string(),
                        value: raw.to_string(),
                    })
                }
            }
        }
        rows += 1;
    }
    Ok((columns, rows))
}
