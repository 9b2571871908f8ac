//! Minimum-norm linear least squares.

use faer::Mat;

use crate::error::{AnfisError, Result};

/// Minimum-norm solution of `design * theta ~= targets`.
///
/// `design` is row-major `rows x cols`. Solved through the thin SVD with
/// singular values below `max(rows, cols) * eps * s_max` treated as zero, so
/// rank-deficient designs still get the pseudo-inverse solution.
pub fn lse_solve(design: &[f64], rows: usize, cols: usize, targets: &[f64]) -> Result<Vec<f64>> {
    if rows == 0 || cols == 0 {
        return Err(AnfisError::Shape(format!("empty {rows} x {cols} design matrix")));
    }
    if design.len() != rows * cols || targets.len() != rows {
        return Err(AnfisError::Shape(format!(
            "design has {} entries and {} targets for a {rows} x {cols} system",
            design.len(),
            targets.len()
        )));
    }
    if design.iter().chain(targets).any(|v| !v.is_finite()) {
        return Err(AnfisError::Numeric("non-finite entry in least-squares system".into()));
    }

    let a = Mat::from_fn(rows, cols, |i, j| design[i * cols + j]);
    let svd = a
        .thin_svd()
        .map_err(|e| AnfisError::Numeric(format!("SVD did not converge: {e:?}")))?;
    let (u, v) = (svd.U(), svd.V());
    let s = svd.S().column_vector();
    let s_max = (0..s.nrows()).map(|k| s[k]).fold(0.0, f64::max);
    let tol = rows.max(cols) as f64 * f64::EPSILON * s_max;

    let mut theta = vec![0.0; cols];
    for k in 0..s.nrows() {
        if s[k] <= tol {
            continue;
        }
        let coef = (0..rows).map(|i| u[(i, k)] * targets[i]).sum::<f64>() / s[k];
        for (j, t) in theta.iter_mut().enumerate() {
            *t += coef * v[(j, k)];
        }
    }
    if theta.iter().any(|v| !v.is_finite()) {
        return Err(AnfisError::Numeric("least-squares solution is not finite".into()));
    }
    Ok(theta)
}
