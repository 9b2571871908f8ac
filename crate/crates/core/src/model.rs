//! Grid-partitioned Takagi-Sugeno rule base and its five-layer forward pass.
//!
//! Rules enumerate the full Cartesian product of per-input membership
//! functions with the last input's index varying fastest. The consequent
//! matrix has one row per rule and `n + 1` columns `[p_1 .. p_n, r]`; the
//! final column is the constant term.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{AnfisError, Result};
use crate::mf::{FuzzyVariable, MfFamily};

/// Below this total firing strength the normalized strengths fall back to uniform.
pub const FIRING_GUARD: f64 = 1e-12;

const FORMAT_TAG: &str = "anfis-model";
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SugenoOrder {
    Zero,
    First,
}

impl SugenoOrder {
    pub fn as_digit(self) -> u8 {
        match self {
            SugenoOrder::Zero => 0,
            SugenoOrder::First => 1,
        }
    }
}

impl fmt::Display for SugenoOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_digit())
    }
}

impl FromStr for SugenoOrder {
    type Err = AnfisError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" | "zero" => Ok(SugenoOrder::Zero),
            "1" | "first" => Ok(SugenoOrder::First),
            _ => Err(AnfisError::Config(format!("unknown Sugeno order `{s}`"))),
        }
    }
}

/// Intermediate layer values of one forward evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardRecord {
    pub firing: Vec<f64>,
    pub normalized: Vec<f64>,
    pub rule_outputs: Vec<f64>,
    pub output: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnfisModel {
    inputs: Vec<FuzzyVariable>,
    order: SugenoOrder,
    /// Row-major, `rule_count() x (n + 1)`.
    consequents: Vec<f64>,
}

impl AnfisModel {
    /// Model with all consequents zero.
    pub fn new(inputs: Vec<FuzzyVariable>, order: SugenoOrder) -> Result<Self> {
        if inputs.is_empty() {
            return Err(AnfisError::Config("model needs at least one input".into()));
        }
        let rules: usize = inputs.iter().map(|v| v.mfs.len()).product();
        let width = inputs.len() + 1;
        Ok(AnfisModel {
            inputs,
            order,
            consequents: vec![0.0; rules * width],
        })
    }

    /// Equally spaced grid of `mfs_per_input` functions on each `(name, lo, hi)` range.
    pub fn grid(
        ranges: &[(String, f64, f64)],
        mfs_per_input: usize,
        family: MfFamily,
        order: SugenoOrder,
    ) -> Result<Self> {
        let inputs = ranges
            .iter()
            .map(|(name, lo, hi)| FuzzyVariable::grid(name.clone(), *lo, *hi, mfs_per_input, family))
            .collect::<Result<Vec<_>>>()?;
        Self::new(inputs, order)
    }

    pub fn inputs(&self) -> &[FuzzyVariable] {
        &self.inputs
    }

    pub(crate) fn inputs_mut(&mut self) -> &mut [FuzzyVariable] {
        &mut self.inputs
    }

    pub fn order(&self) -> SugenoOrder {
        self.order
    }

    pub fn n_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn rule_count(&self) -> usize {
        self.consequents.len() / (self.inputs.len() + 1)
    }

    pub fn consequents(&self) -> &[f64] {
        &self.consequents
    }

    pub fn consequent_row(&self, rule: usize) -> &[f64] {
        let w = self.inputs.len() + 1;
        &self.consequents[rule * w..(rule + 1) * w]
    }

    /// Replaces the full `R x (n + 1)` consequent matrix.
    pub fn set_consequents(&mut self, consequents: Vec<f64>) -> Result<()> {
        let w = self.inputs.len() + 1;
        if consequents.len() != self.rule_count() * w {
            return Err(AnfisError::Shape(format!(
                "consequent matrix has {} entries, expected {}",
                consequents.len(),
                self.rule_count() * w
            )));
        }
        if self.order == SugenoOrder::Zero
            && consequents
                .chunks(w)
                .any(|row| row[..w - 1].iter().any(|&v| v != 0.0))
        {
            return Err(AnfisError::Config(
                "zero-order model must have zero linear coefficients".into(),
            ));
        }
        self.consequents = consequents;
        Ok(())
    }

    /// Number of columns of a design row: `R * (n + 1)` or `R`.
    pub fn linear_param_count(&self) -> usize {
        match self.order {
            SugenoOrder::First => self.consequents.len(),
            SugenoOrder::Zero => self.rule_count(),
        }
    }

    /// Installs the least-squares solution laid out like [`Self::design_row`].
    pub fn set_linear_params(&mut self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.linear_param_count() {
            return Err(AnfisError::Shape(format!(
                "{} linear parameters supplied, model has {}",
                theta.len(),
                self.linear_param_count()
            )));
        }
        match self.order {
            SugenoOrder::First => self.consequents.copy_from_slice(theta),
            SugenoOrder::Zero => {
                let w = self.inputs.len() + 1;
                for (row, &t) in self.consequents.chunks_mut(w).zip(theta) {
                    row.fill(0.0);
                    row[w - 1] = t;
                }
            }
        }
        Ok(())
    }

    pub fn premise_param_count(&self) -> usize {
        self.inputs.iter().map(FuzzyVariable::param_count).sum()
    }

    /// All membership parameters, input by input, function by function.
    pub fn premise_params(&self) -> Vec<f64> {
        self.inputs
            .iter()
            .flat_map(|v| v.mfs.iter().flat_map(|m| m.params().iter().copied()))
            .collect()
    }

    /// Membership-function index of each input for every rule, row-major `R x n`.
    pub fn rule_table(&self) -> Vec<usize> {
        let n = self.inputs.len();
        let r = self.rule_count();
        let mut table = vec![0; r * n];
        for rule in 0..r {
            let mut rest = rule;
            for j in (0..n).rev() {
                let count = self.inputs[j].mfs.len();
                table[rule * n + j] = rest % count;
                rest /= count;
            }
        }
        table
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.inputs.len() {
            return Err(AnfisError::Shape(format!(
                "input has {} values, model expects {}",
                x.len(),
                self.inputs.len()
            )));
        }
        Ok(())
    }

    /// Membership degrees `mu[j][k]` of input `j` in its `k`-th function.
    pub fn memberships(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.check_len(x)?;
        Ok(self
            .inputs
            .iter()
            .zip(x)
            .map(|(v, &xj)| v.mfs.iter().map(|m| m.eval(xj)).collect())
            .collect())
    }

    /// Product T-norm firing strength of every rule.
    pub fn firing_strengths(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mu = self.memberships(x)?;
        Ok(firing_from_memberships(&mu, self.rule_count()))
    }

    pub fn forward(&self, x: &[f64]) -> Result<ForwardRecord> {
        let firing = self.firing_strengths(x)?;
        let normalized = normalize(&firing);
        let rule_outputs: Vec<f64> = (0..self.rule_count())
            .map(|i| self.rule_output(i, x))
            .collect();
        let output = normalized
            .iter()
            .zip(&rule_outputs)
            .map(|(wn, f)| wn * f)
            .sum();
        Ok(ForwardRecord {
            firing,
            normalized,
            rule_outputs,
            output,
        })
    }

    pub(crate) fn rule_output(&self, rule: usize, x: &[f64]) -> f64 {
        let row = self.consequent_row(rule);
        let n = x.len();
        match self.order {
            SugenoOrder::Zero => row[n],
            SugenoOrder::First => row[..n].iter().zip(x).map(|(p, xi)| p * xi).sum::<f64>() + row[n],
        }
    }

    /// Crisp output for one input vector.
    pub fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(self.forward(x)?.output)
    }

    /// Outputs for row-major inputs with `n` columns.
    pub fn predict_batch(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        let n = self.inputs.len();
        if inputs.len() % n != 0 {
            return Err(AnfisError::Shape(format!(
                "{} values do not form rows of {n} inputs",
                inputs.len()
            )));
        }
        inputs.par_chunks(n).map(|row| self.predict(row)).collect()
    }

    /// Regressor row whose dot product with the linear parameters is the output.
    pub fn design_row(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut row = vec![0.0; self.linear_param_count()];
        self.design_row_into(x, &mut row)?;
        Ok(row)
    }

    pub(crate) fn design_row_into(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        let normalized = normalize(&self.firing_strengths(x)?);
        match self.order {
            SugenoOrder::Zero => out.copy_from_slice(&normalized),
            SugenoOrder::First => {
                let w = x.len() + 1;
                for (chunk, wn) in out.chunks_mut(w).zip(&normalized) {
                    for (c, xi) in chunk.iter_mut().zip(x) {
                        *c = wn * xi;
                    }
                    chunk[w - 1] = *wn;
                }
            }
        }
        Ok(())
    }

    /// Linear parameters in design-row layout.
    pub fn linear_params(&self) -> Vec<f64> {
        match self.order {
            SugenoOrder::First => self.consequents.clone(),
            SugenoOrder::Zero => {
                let w = self.inputs.len() + 1;
                self.consequents.chunks(w).map(|row| row[w - 1]).collect()
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(&ModelDocument::from(self))
            .map_err(|e| AnfisError::Model(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument =
            serde_json::from_str(text).map_err(|e| AnfisError::Model(e.to_string()))?;
        doc.try_into()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| AnfisError::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| AnfisError::io(path, e))?;
        Self::from_json(&text)
    }
}

pub(crate) fn firing_from_memberships(mu: &[Vec<f64>], rules: usize) -> Vec<f64> {
    let mut w = vec![1.0; rules];
    // stride of input j = product of MF counts of inputs after j
    let mut stride = rules;
    for degrees in mu {
        let count = degrees.len();
        stride /= count;
        for (i, wi) in w.iter_mut().enumerate() {
            *wi *= degrees[(i / stride) % count];
        }
    }
    w
}

/// Normalized firing strengths; uniform when the total is below [`FIRING_GUARD`].
pub fn normalize(w: &[f64]) -> Vec<f64> {
    let total: f64 = w.iter().sum();
    if total < FIRING_GUARD {
        let u = 1.0 / w.len() as f64;
        vec![u; w.len()]
    } else {
        w.iter().map(|wi| wi / total).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDocument {
    format: String,
    version: u32,
    order: SugenoOrder,
    inputs: Vec<FuzzyVariable>,
    consequents: Vec<Vec<f64>>,
}

impl From<&AnfisModel> for ModelDocument {
    fn from(m: &AnfisModel) -> Self {
        ModelDocument {
            format: FORMAT_TAG.into(),
            version: FORMAT_VERSION,
            order: m.order,
            inputs: m.inputs.clone(),
            consequents: m
                .consequents
                .chunks(m.inputs.len() + 1)
                .map(<[f64]>::to_vec)
                .collect(),
        }
    }
}

impl TryFrom<ModelDocument> for AnfisModel {
    type Error = AnfisError;

    fn try_from(doc: ModelDocument) -> Result<Self> {
        if doc.format != FORMAT_TAG || doc.version != FORMAT_VERSION {
            return Err(AnfisError::Model(format!(
                "unsupported document {} v{}",
                doc.format, doc.version
            )));
        }
        for v in &doc.inputs {
            FuzzyVariable::new(v.name.clone(), v.lo, v.hi, v.mfs.clone())?;
        }
        let mut model = AnfisModel::new(doc.inputs, doc.order)?;
        let w = model.n_inputs() + 1;
        if doc.consequents.len() != model.rule_count() || doc.consequents.iter().any(|r| r.len() != w) {
            return Err(AnfisError::Model(format!(
                "consequent matrix must be {} x {w}",
                model.rule_count()
            )));
        }
        model.set_consequents(doc.consequents.concat())?;
        Ok(model)
    }
}
