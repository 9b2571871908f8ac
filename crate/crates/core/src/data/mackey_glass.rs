//! Mackey-Glass delay equation and lag embedding.
//!
//! `dx/dt = 0.2 x(t - tau) / (1 + x(t - tau)^10) - 0.1 x(t)`, integrated with
//! classical RK4 on a uniform grid. The delayed value at full steps is read
//! directly from the stored grid; at half steps it comes from the cubic
//! Hermite interpolant through the two neighbouring grid points and their
//! stored slopes, keeping the delay term fourth-order accurate. History is
//! constant `x0` (zero slope) for `t <= 0`.

use std::path::Path;

use crate::data::Dataset;
use crate::error::{AnfisError, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MgConfig {
    pub tau: f64,
    pub horizon: f64,
    pub step: f64,
    pub x0: f64,
}

impl Default for MgConfig {
    fn default() -> Self {
        MgConfig {
            tau: 17.0,
            horizon: 2000.0,
            step: 0.1,
            x0: 1.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MgSeries {
    pub step: f64,
    pub tau: f64,
    pub x0: f64,
    /// `x(k * step)` for `k = 0 ..= horizon / step`.
    pub values: Vec<f64>,
}

/// Right-hand side of the delay equation.
pub fn mg_rate(x: f64, delayed: f64) -> f64 {
    0.2 * delayed / (1.0 + delayed.powi(10)) - 0.1 * x
}

fn whole_multiple(value: f64, unit: f64) -> Option<usize> {
    let q = value / unit;
    let r = q.round();
    ((q - r).abs() < 1e-9 && r >= 0.0).then_some(r as usize)
}

pub fn mackey_glass(cfg: MgConfig) -> Result<MgSeries> {
    let bad = |what: &str| AnfisError::Config(format!("Mackey-Glass: {what}"));
    if !(cfg.step > 0.0 && cfg.step <= 1.0) {
        return Err(bad(&format!("step {} must lie in (0, 1]", cfg.step)));
    }
    let per_unit = whole_multiple(1.0, cfg.step).ok_or_else(|| bad("step must divide 1"))?;
    let delay = whole_multiple(cfg.tau, cfg.step)
        .filter(|&d| d >= 1)
        .ok_or_else(|| bad("tau must be a positive multiple of the step"))?;
    if !(cfg.horizon >= 0.0) || !cfg.x0.is_finite() {
        return Err(bad("horizon must be non-negative and x0 finite"));
    }
    let steps = (cfg.horizon * per_unit as f64).ceil() as usize;

    let h = cfg.step;
    let mut x = Vec::with_capacity(steps + 1);
    let mut slope = Vec::with_capacity(steps + 1);
    x.push(cfg.x0);
    slope.push(mg_rate(cfg.x0, cfg.x0));
    for i in 0..steps {
        let back = i as isize - delay as isize;
        let (d0, d1, dm) = if back < 0 {
            (cfg.x0, cfg.x0, cfg.x0)
        } else {
            let (k0, k1) = (back as usize, back as usize + 1);
            let mid = 0.5 * (x[k0] + x[k1]) + 0.125 * h * (slope[k0] - slope[k1]);
            (x[k0], x[k1], mid)
        };
        let xi = x[i];
        let k1 = mg_rate(xi, d0);
        let k2 = mg_rate(xi + 0.5 * h * k1, dm);
        let k3 = mg_rate(xi + 0.5 * h * k2, dm);
        let k4 = mg_rate(xi + h * k3, d1);
        let next = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(AnfisError::Numeric(format!("Mackey-Glass diverged at step {i}")));
        }
        x.push(next);
        slope.push(mg_rate(next, d1));
    }
    Ok(MgSeries {
        step: h,
        tau: cfg.tau,
        x0: cfg.x0,
        values: x,
    })
}

impl MgSeries {
    fn per_unit(&self) -> usize {
        (1.0 / self.step).round() as usize
    }

    /// Value at integer time `t`, if covered.
    pub fn at(&self, t: usize) -> Option<f64> {
        self.values.get(t * self.per_unit()).copied()
    }

    /// `x(0), x(1), ...` up to the last covered integer time.
    pub fn integer_samples(&self) -> Vec<f64> {
        self.values.iter().step_by(self.per_unit()).copied().collect()
    }

    /// Writes integer samples as CSV `t,x`.
    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        save_series_csv(path, &self.integer_samples())
    }
}

pub fn save_series_csv(path: impl AsRef<Path>, samples: &[f64]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
    w.write_record(["t", "x"]).map_err(|e| AnfisError::csv(path, e))?;
    for (t, x) in samples.iter().enumerate() {
        w.write_record([t.to_string(), x.to_string()])
            .map_err(|e| AnfisError::csv(path, e))?;
    }
    w.flush().map_err(|e| AnfisError::io(path, e))
}

/// Reads a `t,x` CSV whose `t` column runs 0, 1, 2, ...
pub fn load_series_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let ds = crate::data::load_csv(path, &["t".to_string()], "x")?;
    for (k, (t, _)) in ds.rows().enumerate() {
        if t[0] != k as f64 {
            return Err(AnfisError::Config(format!(
                "{}: row {} has t = {}, expected {k}",
                path.display(),
                k + 1,
                t[0]
            )));
        }
    }
    Ok(ds.targets().to_vec())
}

/// Lagged inputs and a future target from integer-time samples.
///
/// Row `t` holds `x(t + lag)` for each lag and target `x(t + horizon)`; rows
/// run over every `t` where all indices are in range, in increasing `t`.
pub fn embed(samples: &[f64], lags: &[i64], horizon: usize) -> Result<Dataset> {
    if lags.is_empty() || lags.iter().any(|&l| l > 0) || horizon == 0 {
        return Err(AnfisError::Config(
            "embedding needs non-positive lags and a positive horizon".into(),
        ));
    }
    let first = lags.iter().map(|&l| (-l) as usize).max().unwrap_or(0);
    if samples.len() < first + horizon + 1 {
        return Err(AnfisError::Config(format!(
            "series of {} samples is too short for lag {first} and horizon {horizon}",
            samples.len()
        )));
    }
    let last = samples.len() - 1 - horizon;
    let mut inputs = Vec::with_capacity((last - first + 1) * lags.len());
    let mut targets = Vec::with_capacity(last - first + 1);
    for t in first..=last {
        inputs.extend(lags.iter().map(|&l| samples[(t as i64 + l) as usize]));
        targets.push(samples[t + horizon]);
    }
    let names = lags
        .iter()
        .map(|&l| if l == 0 { "x(t)".to_string() } else { format!("x(t{l})") })
        .collect();
    Dataset::new(names, format!("x(t+{horizon})"), inputs, targets)
}

/// Standard embedding: inputs `x(t-12), x(t-6), x(t)`, target `x(t+6)`.
pub fn embed_default(samples: &[f64]) -> Result<Dataset> {
    embed(samples, &[-12, -6, 0], 6)
}
