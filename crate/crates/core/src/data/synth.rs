//! Three-variable validation function sampled on a Cartesian grid.
//!
//! `f(x, y, z) = (1 + x^0.5 + 1/y + z^-1.5)^2`, the classical three-input
//! neuro-fuzzy benchmark. It stands in for a validation equation that is not
//! published alongside the power-plant study; results on it are not
//! comparable to any reported figures.

use crate::data::Dataset;
use crate::error::{AnfisError, Result};

/// Note carried alongside generated benchmark data.
pub const SYNTH_NOTE: &str =
    "substitute benchmark f(x,y,z) = (1 + x^0.5 + 1/y + z^-1.5)^2; not the unpublished original";

pub fn synth_function(x: f64, y: f64, z: f64) -> f64 {
    let s = 1.0 + x.sqrt() + 1.0 / y + z.powf(-1.5);
    s * s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
    pub points: [usize; 3],
}

impl Default for GridSpec {
    /// Integer points of `[1, 6]^3`.
    fn default() -> Self {
        GridSpec {
            lo: [1.0; 3],
            hi: [6.0; 3],
            points: [6; 3],
        }
    }
}

fn axis(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Samples [`synth_function`] on the grid, `z` varying fastest.
pub fn synth_benchmark(grid: GridSpec) -> Result<Dataset> {
    for d in 0..3 {
        if !(grid.lo[d] > 0.0) || !(grid.hi[d] >= grid.lo[d]) || !grid.hi[d].is_finite() {
            return Err(AnfisError::Domain(format!(
                "axis {d}: bounds [{}, {}] must be positive and ordered",
                grid.lo[d], grid.hi[d]
            )));
        }
        if grid.points[d] == 0 {
            return Err(AnfisError::Config(format!("axis {d} has no points")));
        }
    }
    let [xs, ys, zs] = [0, 1, 2].map(|d| axis(grid.lo[d], grid.hi[d], grid.points[d]));
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                inputs.extend([x, y, z]);
                targets.push(synth_function(x, y, z));
            }
        }
    }
    Dataset::new(
        vec!["x".into(), "y".into(), "z".into()],
        "f_substitute",
        inputs,
        targets,
    )
}
