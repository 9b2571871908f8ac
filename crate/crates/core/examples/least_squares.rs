//! Minimum-norm least squares on a full-rank and a rank-deficient system.
//!
//! ```bash
//! cargo run -p anfis --example least_squares
//! ```

use anfis::lse::lse_solve;

fn main() -> anfis::Result<()> {
    // y = 3 - 2x sampled at five points with a little noise
    let xs = [0.0, 1.0, 2.0, 3.0, 4.0];
    let ys = [3.05, 0.98, -1.02, -2.97, -5.01];
    let design: Vec<f64> = xs.iter().flat_map(|&x| [x, 1.0]).collect();
    let theta = lse_solve(&design, 5, 2, &ys)?;
    println!("slope {:.4}, intercept {:.4}", theta[0], theta[1]);

    // the same column twice: infinitely many solutions, the shortest splits evenly
    let twin: Vec<f64> = xs.iter().flat_map(|&x| [x, x]).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
    let theta = lse_solve(&twin, 5, 2, &ys)?;
    println!("duplicated column: {:.6} {:.6}", theta[0], theta[1]);
    Ok(())
}
