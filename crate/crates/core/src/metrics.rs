//! Error measures and parity data.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{AnfisError, Result};

/// Normalization of the squared-error sum under the root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RmseForm {
    /// `sqrt(sum / (2P))`: the training cost.
    Cost,
    /// `sqrt(sum / P)`: conventional RMSE.
    Standard,
}

fn check_pair(y_obs: &[f64], y_model: &[f64]) -> Result<()> {
    if y_obs.len() != y_model.len() {
        return Err(AnfisError::Shape(format!(
            "{} observations vs {} predictions",
            y_obs.len(),
            y_model.len()
        )));
    }
    if y_obs.is_empty() {
        return Err(AnfisError::Shape("no samples".into()));
    }
    Ok(())
}

fn sse(y_obs: &[f64], y_model: &[f64]) -> f64 {
    y_obs.iter().zip(y_model).map(|(a, b)| (a - b) * (a - b)).sum()
}

pub fn rmse(y_obs: &[f64], y_model: &[f64], form: RmseForm) -> Result<f64> {
    check_pair(y_obs, y_model)?;
    let p = y_obs.len() as f64;
    let denom = match form {
        RmseForm::Cost => 2.0 * p,
        RmseForm::Standard => p,
    };
    Ok((sse(y_obs, y_model) / denom).sqrt())
}

/// Explained fraction of the observed variance; negative when worse than the mean.
pub fn r_squared(y_obs: &[f64], y_model: &[f64]) -> Result<f64> {
    check_pair(y_obs, y_model)?;
    if y_obs.len() < 2 {
        return Err(AnfisError::Shape("R^2 needs at least two samples".into()));
    }
    let mean = y_obs.iter().sum::<f64>() / y_obs.len() as f64;
    let total: f64 = y_obs.iter().map(|y| (y - mean) * (y - mean)).sum();
    if total == 0.0 {
        return Err(AnfisError::Numeric("observations have zero variance".into()));
    }
    Ok((total - sse(y_obs, y_model)) / total)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvalReport {
    pub rmse_cost: f64,
    pub rmse_std: f64,
    /// `None` when fewer than two samples or constant observations.
    pub r_squared: Option<f64>,
    pub n: usize,
}

pub fn evaluate(y_obs: &[f64], y_model: &[f64]) -> Result<EvalReport> {
    Ok(EvalReport {
        rmse_cost: rmse(y_obs, y_model, RmseForm::Cost)?,
        rmse_std: rmse(y_obs, y_model, RmseForm::Standard)?,
        r_squared: r_squared(y_obs, y_model).ok(),
        n: y_obs.len(),
    })
}

/// Writes `# r_squared=<value>` followed by CSV `observed,predicted`.
pub fn parity_export(y_obs: &[f64], y_model: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    check_pair(y_obs, y_model)?;
    let r2 = r_squared(y_obs, y_model)?;
    let mut file = std::fs::File::create(path).map_err(|e| AnfisError::io(path, e))?;
    writeln!(file, "# r_squared={r2}").map_err(|e| AnfisError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(["observed", "predicted"])
        .map_err(|e| AnfisError::csv(path, e))?;
    for (o, p) in y_obs.iter().zip(y_model) {
        w.write_record([o.to_string(), p.to_string()])
            .map_err(|e| AnfisError::csv(path, e))?;
    }
    w.flush().map_err(|e| AnfisError::io(path, e))
}

/// Parity data read back as `(observed, predicted, r_squared)`.
pub fn parity_import(path: impl AsRef<Path>) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| AnfisError::io(path, e))?;
    let r2 = text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# r_squared="))
        .and_then(|v| v.trim().parse::<f64>().ok())
        .ok_or_else(|| AnfisError::Config(format!("{}: missing r_squared line", path.display())))?;
    let ds = crate::data::load_csv(path, &["observed".to_string()], "predicted")?;
    Ok((ds.inputs().to_vec(), ds.targets().to_vec(), r2))
}
