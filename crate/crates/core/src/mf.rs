//! Membership-function families and grid initialization.
//!
//! Each family carries a flat parameter vector in a fixed order:
//!
//! | family        | notation   | params                |
//! |---------------|------------|-----------------------|
//! | Gaussian      | `gaussmf`  | `c, sigma`            |
//! | Triangular    | `trimf`    | `a, b, c`             |
//! | Trapezoidal   | `trapmf`   | `a, b, c, d`          |
//! | General bell  | `gbellmf`  | `a, b, c`             |
//! | Pi-shaped     | `pimf`     | `a, b, c, d`          |
//! | Sigmoid diff. | `dsigmf`   | `a1, c1, a2, c2`      |
//! | Sigmoid prod. | `psigmf`   | `a1, c1, a2, c2`      |
//! | Two-sided     | `gauss2mf` | `c1, sigma1, c2, sigma2` |
//!
//! Piecewise-linear families report a zero partial at their corners.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{AnfisError, Result};

/// Degree every pair of neighbouring grid functions shares at their midpoint.
pub const EPSILON_COMPLETENESS: f64 = 0.5;

/// Lower bound for the generalized-bell shape exponent.
const BELL_SHAPE_MIN: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MfFamily {
    #[serde(rename = "gaussmf")]
    Gaussian,
    #[serde(rename = "trimf")]
    Triangular,
    #[serde(rename = "trapmf")]
    Trapezoidal,
    #[serde(rename = "gbellmf")]
    GeneralizedBell,
    #[serde(rename = "pimf")]
    PiShaped,
    #[serde(rename = "dsigmf")]
    SigmoidDifference,
    #[serde(rename = "psigmf")]
    SigmoidProduct,
    #[serde(rename = "gauss2mf")]
    TwoSidedGaussian,
}

impl MfFamily {
    pub const ALL: [MfFamily; 8] = [
        MfFamily::Gaussian,
        MfFamily::Triangular,
        MfFamily::Trapezoidal,
        MfFamily::GeneralizedBell,
        MfFamily::PiShaped,
        MfFamily::SigmoidDifference,
        MfFamily::SigmoidProduct,
        MfFamily::TwoSidedGaussian,
    ];

    pub fn arity(self) -> usize {
        match self {
            MfFamily::Gaussian => 2,
            MfFamily::Triangular | MfFamily::GeneralizedBell => 3,
            _ => 4,
        }
    }

    /// Conventional short name (`gaussmf`, `trimf`, ...).
    pub fn notation(self) -> &'static str {
        match self {
            MfFamily::Gaussian => "gaussmf",
            MfFamily::Triangular => "trimf",
            MfFamily::Trapezoidal => "trapmf",
            MfFamily::GeneralizedBell => "gbellmf",
            MfFamily::PiShaped => "pimf",
            MfFamily::SigmoidDifference => "dsigmf",
            MfFamily::SigmoidProduct => "psigmf",
            MfFamily::TwoSidedGaussian => "gauss2mf",
        }
    }

    /// Indices of parameters that act as widths and are kept above `sigma_min`.
    pub fn width_params(self) -> &'static [usize] {
        match self {
            MfFamily::Gaussian => &[1],
            MfFamily::GeneralizedBell => &[0],
            MfFamily::TwoSidedGaussian => &[1, 3],
            _ => &[],
        }
    }
}

impl fmt::Display for MfFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.notation())
    }
}

impl FromStr for MfFamily {
    type Err = AnfisError;

    fn from_str(s: &str) -> Result<Self> {
        MfFamily::ALL
            .into_iter()
            .find(|f| f.notation().eq_ignore_ascii_case(s))
            .ok_or_else(|| AnfisError::Config(format!("unknown membership family `{s}`")))
    }
}

/// A parametric fuzzy set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMf", into = "RawMf")]
pub struct MembershipFunction {
    family: MfFamily,
    params: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawMf {
    family: MfFamily,
    params: Vec<f64>,
}

impl TryFrom<RawMf> for MembershipFunction {
    type Error = AnfisError;

    fn try_from(raw: RawMf) -> Result<Self> {
        MembershipFunction::new(raw.family, raw.params)
    }
}

impl From<MembershipFunction> for RawMf {
    fn from(mf: MembershipFunction) -> Self {
        RawMf {
            family: mf.family,
            params: mf.params,
        }
    }
}

impl MembershipFunction {
    pub fn new(family: MfFamily, params: Vec<f64>) -> Result<Self> {
        validate(family, &params)?;
        Ok(MembershipFunction { family, params })
    }

    pub fn gaussian(center: f64, sigma: f64) -> Result<Self> {
        Self::new(MfFamily::Gaussian, vec![center, sigma])
    }

    pub fn triangular(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(MfFamily::Triangular, vec![a, b, c])
    }

    pub fn family(&self) -> MfFamily {
        self.family
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Membership degree at `x`, always in `[0, 1]`.
    pub fn eval(&self, x: f64) -> f64 {
        let p = &self.params;
        match self.family {
            MfFamily::Gaussian => gauss(x, p[0], p[1]),
            MfFamily::Triangular => tri(x, p[0], p[1], p[2]),
            MfFamily::Trapezoidal => trap(x, p[0], p[1], p[2], p[3]),
            MfFamily::GeneralizedBell => bell(x, p[0], p[1], p[2]),
            MfFamily::PiShaped => s_curve(x, p[0], p[1]) * (1.0 - s_curve(x, p[2], p[3])),
            MfFamily::SigmoidDifference => {
                (sigmoid(p[0] * (x - p[1])) - sigmoid(p[2] * (x - p[3]))).clamp(0.0, 1.0)
            }
            MfFamily::SigmoidProduct => sigmoid(p[0] * (x - p[1])) * sigmoid(p[2] * (x - p[3])),
            MfFamily::TwoSidedGaussian => {
                let left = if x < p[0] { gauss(x, p[0], p[1]) } else { 1.0 };
                let right = if x > p[2] { gauss(x, p[2], p[3]) } else { 1.0 };
                left * right
            }
        }
    }

    /// Partial derivatives of the degree with respect to each parameter,
    /// in declared parameter order.
    pub fn param_gradients(&self, x: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.params.len()];
        self.eval_with_gradients(x, &mut out);
        out
    }

    /// Evaluates the degree and writes the parameter partials into `grad`.
    pub fn eval_with_gradients(&self, x: f64, grad: &mut [f64]) -> f64 {
        debug_assert_eq!(grad.len(), self.params.len());
        grad.fill(0.0);
        let p = &self.params;
        match self.family {
            MfFamily::Gaussian => {
                let (c, s) = (p[0], p[1]);
                let mu = gauss(x, c, s);
                let dx = x - c;
                grad[0] = mu * dx / (s * s);
                grad[1] = mu * dx * dx / (s * s * s);
                mu
            }
            MfFamily::Triangular => {
                let (a, b, c) = (p[0], p[1], p[2]);
                if x > a && x < b {
                    let l = b - a;
                    grad[0] = (x - b) / (l * l);
                    grad[1] = -(x - a) / (l * l);
                } else if x > b && x < c {
                    let l = c - b;
                    grad[1] = (c - x) / (l * l);
                    grad[2] = (x - b) / (l * l);
                }
                tri(x, a, b, c)
            }
            MfFamily::Trapezoidal => {
                let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
                if x > a && x < b {
                    let l = b - a;
                    grad[0] = (x - b) / (l * l);
                    grad[1] = -(x - a) / (l * l);
                } else if x > c && x < d {
                    let l = d - c;
                    grad[2] = (d - x) / (l * l);
                    grad[3] = (x - c) / (l * l);
                }
                trap(x, a, b, c, d)
            }
            MfFamily::GeneralizedBell => {
                let (a, b, c) = (p[0], p[1], p[2]);
                let u = ((x - c) / a).abs();
                let t = u.powf(2.0 * b);
                let mu = 1.0 / (1.0 + t);
                if u > 0.0 && t.is_finite() {
                    let m2 = mu * mu;
                    grad[0] = m2 * 2.0 * b * t / a;
                    grad[1] = -m2 * t * 2.0 * u.ln();
                    grad[2] = m2 * 2.0 * b * t / (x - c);
                }
                mu
            }
            MfFamily::PiShaped => {
                let (s, ds_a, ds_b) = s_curve_grad(x, p[0], p[1]);
                let (z_raw, dz_c, dz_d) = s_curve_grad(x, p[2], p[3]);
                let z = 1.0 - z_raw;
                grad[0] = z * ds_a;
                grad[1] = z * ds_b;
                grad[2] = -s * dz_c;
                grad[3] = -s * dz_d;
                s * z
            }
            MfFamily::SigmoidDifference => {
                let s1 = sigmoid(p[0] * (x - p[1]));
                let s2 = sigmoid(p[2] * (x - p[3]));
                let raw = s1 - s2;
                if raw > 0.0 && raw < 1.0 {
                    let d1 = s1 * (1.0 - s1);
                    let d2 = s2 * (1.0 - s2);
                    grad[0] = d1 * (x - p[1]);
                    grad[1] = -d1 * p[0];
                    grad[2] = -d2 * (x - p[3]);
                    grad[3] = d2 * p[2];
                }
                raw.clamp(0.0, 1.0)
            }
            MfFamily::SigmoidProduct => {
                let s1 = sigmoid(p[0] * (x - p[1]));
                let s2 = sigmoid(p[2] * (x - p[3]));
                let d1 = s1 * (1.0 - s1);
                let d2 = s2 * (1.0 - s2);
                grad[0] = s2 * d1 * (x - p[1]);
                grad[1] = -s2 * d1 * p[0];
                grad[2] = s1 * d2 * (x - p[3]);
                grad[3] = -s1 * d2 * p[2];
                s1 * s2
            }
            MfFamily::TwoSidedGaussian => {
                let (c1, s1, c2, s2) = (p[0], p[1], p[2], p[3]);
                let left = if x < c1 { gauss(x, c1, s1) } else { 1.0 };
                let right = if x > c2 { gauss(x, c2, s2) } else { 1.0 };
                if x < c1 {
                    let dx = x - c1;
                    grad[0] = right * left * dx / (s1 * s1);
                    grad[1] = right * left * dx * dx / (s1 * s1 * s1);
                }
                if x > c2 {
                    let dx = x - c2;
                    grad[2] = left * right * dx / (s2 * s2);
                    grad[3] = left * right * dx * dx / (s2 * s2 * s2);
                }
                left * right
            }
        }
    }

    /// Unchecked parameter access; follow with [`Self::repair`].
    pub(crate) fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Restores family invariants after an unconstrained parameter update:
    /// widths are clamped to `sigma_min`, breakpoints re-sorted.
    pub(crate) fn repair(&mut self, sigma_min: f64) {
        for &i in self.family.width_params() {
            if self.params[i] < sigma_min {
                self.params[i] = sigma_min;
            }
        }
        match self.family {
            MfFamily::Triangular | MfFamily::Trapezoidal | MfFamily::PiShaped => {
                self.params.sort_by(f64::total_cmp);
            }
            MfFamily::GeneralizedBell => {
                if self.params[1] < BELL_SHAPE_MIN {
                    self.params[1] = BELL_SHAPE_MIN;
                }
            }
            _ => {}
        }
    }
}

fn validate(family: MfFamily, p: &[f64]) -> Result<()> {
    let fail = |reason: String| AnfisError::Param {
        family: family.notation(),
        reason,
    };
    if p.len() != family.arity() {
        return Err(fail(format!(
            "expected {} parameters, got {}",
            family.arity(),
            p.len()
        )));
    }
    if let Some(v) = p.iter().find(|v| !v.is_finite()) {
        return Err(fail(format!("non-finite parameter {v}")));
    }
    for &i in family.width_params() {
        if p[i] <= 0.0 {
            return Err(fail(format!("width parameter {} must be positive", p[i])));
        }
    }
    match family {
        MfFamily::Triangular | MfFamily::Trapezoidal | MfFamily::PiShaped => {
            if p.windows(2).any(|w| w[0] > w[1]) {
                return Err(fail(format!("breakpoints {p:?} are not ordered")));
            }
        }
        MfFamily::GeneralizedBell if p[1] <= 0.0 => {
            return Err(fail(format!("shape exponent {} must be positive", p[1])));
        }
        _ => {}
    }
    Ok(())
}

fn gauss(x: f64, c: f64, s: f64) -> f64 {
    let z = (x - c) / s;
    (-0.5 * z * z).exp()
}

fn tri(x: f64, a: f64, b: f64, c: f64) -> f64 {
    if x == b {
        1.0
    } else if x <= a || x >= c {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (c - x) / (c - b)
    }
}

fn trap(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x >= b && x <= c {
        1.0
    } else if x <= a || x >= d {
        0.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

fn bell(x: f64, a: f64, b: f64, c: f64) -> f64 {
    1.0 / (1.0 + ((x - c) / a).abs().powf(2.0 * b))
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Quadratic-spline S curve rising from 0 at `a` to 1 at `b`.
fn s_curve(x: f64, a: f64, b: f64) -> f64 {
    s_curve_grad(x, a, b).0
}

fn s_curve_grad(x: f64, a: f64, b: f64) -> (f64, f64, f64) {
    if x <= a {
        return (0.0, 0.0, 0.0);
    }
    if x >= b {
        return (1.0, 0.0, 0.0);
    }
    let l = b - a;
    let l3 = l * l * l;
    if x <= 0.5 * (a + b) {
        let r = (x - a) / l;
        (
            2.0 * r * r,
            4.0 * (x - a) * (x - b) / l3,
            -4.0 * (x - a) * (x - a) / l3,
        )
    } else {
        let r = (x - b) / l;
        (
            1.0 - 2.0 * r * r,
            -4.0 * (x - b) * (x - b) / l3,
            4.0 * (x - b) * (x - a) / l3,
        )
    }
}

/// A named input with its universe of discourse and fuzzy partition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzyVariable {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub mfs: Vec<MembershipFunction>,
}

impl FuzzyVariable {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, mfs: Vec<MembershipFunction>) -> Result<Self> {
        let name = name.into();
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(AnfisError::Config(format!(
                "variable `{name}`: range [{lo}, {hi}] is empty or non-finite"
            )));
        }
        if mfs.is_empty() {
            return Err(AnfisError::Config(format!(
                "variable `{name}` has no membership functions"
            )));
        }
        Ok(FuzzyVariable { name, lo, hi, mfs })
    }

    /// Variable with `count` equally spaced functions of `family` over `[lo, hi]`.
    pub fn grid(name: impl Into<String>, lo: f64, hi: f64, count: usize, family: MfFamily) -> Result<Self> {
        let mfs = init_grid(lo, hi, count, family)?;
        Self::new(name, lo, hi, mfs)
    }

    pub fn sigma_min(&self, scale: f64) -> f64 {
        scale * (self.hi - self.lo)
    }

    pub fn param_count(&self) -> usize {
        self.mfs.iter().map(|m| m.params.len()).sum()
    }
}

/// Equally spaced membership functions whose neighbours cross at degree 0.5
/// midway between centers.
pub fn init_grid(lo: f64, hi: f64, count: usize, family: MfFamily) -> Result<Vec<MembershipFunction>> {
    if count < 2 {
        return Err(AnfisError::Config(format!(
            "grid needs at least 2 membership functions, got {count}"
        )));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(AnfisError::Config(format!("grid range [{lo}, {hi}] is empty or non-finite")));
    }
    let d = (hi - lo) / (count - 1) as f64;
    let half_height = (2.0 * std::f64::consts::LN_2).sqrt();
    // sigmoid slope: 10%..90% rise over half a spacing
    let slope = 4.0 * 9f64.ln() / d;
    let dsig_shift = bisect(|s| sigmoid(slope * (d + s)) + sigmoid(slope * s) - 1.5, 0.0, d);
    let psig_shift = bisect(|s| sigmoid(slope * (d + s)) * sigmoid(slope * s) - 0.5, 0.0, d);

    (0..count)
        .map(|k| {
            let c = lo + k as f64 * d;
            let params = match family {
                MfFamily::Gaussian => vec![c, d / (2.0 * half_height)],
                MfFamily::Triangular => vec![c - d, c, c + d],
                MfFamily::Trapezoidal | MfFamily::PiShaped => {
                    vec![c - 0.75 * d, c - 0.25 * d, c + 0.25 * d, c + 0.75 * d]
                }
                MfFamily::GeneralizedBell => vec![0.5 * d, 2.0, c],
                MfFamily::SigmoidDifference => {
                    let e = 0.5 * d + dsig_shift;
                    vec![slope, c - e, slope, c + e]
                }
                MfFamily::SigmoidProduct => {
                    let e = 0.5 * d + psig_shift;
                    vec![slope, c - e, -slope, c + e]
                }
                MfFamily::TwoSidedGaussian => {
                    let s = 0.375 * d / half_height;
                    vec![c - 0.125 * d, s, c + 0.125 * d, s]
                }
            };
            MembershipFunction::new(family, params)
        })
        .collect()
}

/// Root of an increasing function on `[lo, hi]`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_peak_and_half_height() {
        let g = MembershipFunction::gaussian(5.0, 2.0).unwrap();
        assert_eq!(g.eval(5.0), 1.0);
        let g = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        let x = (2.0 * std::f64::consts::LN_2).sqrt();
        assert!((g.eval(x) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_ramp_and_kink() {
        let t = MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap();
        assert_eq!(t.eval(0.5), 0.5);
        assert_eq!(t.param_gradients(1.0), vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn gaussian_gradients_at_peak_and_unit_offset() {
        let g = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        assert_eq!(g.param_gradients(0.0), vec![0.0, 0.0]);
        let e = (-0.5f64).exp();
        let grad = g.param_gradients(1.0);
        assert!((grad[0] - e).abs() < 1e-15);
        assert!((grad[1] - e).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(MembershipFunction::new(MfFamily::Gaussian, vec![0.0]).is_err());
        assert!(MembershipFunction::gaussian(0.0, 0.0).is_err());
        assert!(MembershipFunction::triangular(1.0, 0.0, 2.0).is_err());
        assert!(MembershipFunction::new(MfFamily::Trapezoidal, vec![0.0, 2.0, 1.0, 3.0]).is_err());
        assert!(MembershipFunction::gaussian(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn notation_round_trip() {
        for f in MfFamily::ALL {
            assert_eq!(f.notation().parse::<MfFamily>().unwrap(), f);
        }
        assert!("bogusmf".parse::<MfFamily>().is_err());
    }

    #[test]
    fn grid_gaussian_width() {
        let mfs = init_grid(0.0, 10.0, 3, MfFamily::Gaussian).unwrap();
        let centers: Vec<f64> = mfs.iter().map(|m| m.params()[0]).collect();
        assert_eq!(centers, vec![0.0, 5.0, 10.0]);
        // solve exp(-(d/2)^2 / (2 s^2)) = 0.5 for d = 5
        let expected = 2.5 / (2.0 * 2f64.ln()).sqrt();
        assert!((mfs[0].params()[1] - expected).abs() < 1e-12);
        assert!((expected - 2.1233).abs() < 1e-4);
    }

    #[test]
    fn grid_crossover_is_half_for_every_family() {
        for family in MfFamily::ALL {
            let mfs = init_grid(0.0, 1.0, 2, family).unwrap();
            for m in &mfs {
                assert!((m.eval(0.5) - 0.5).abs() < 1e-9, "{family}: {}", m.eval(0.5));
            }
        }
    }

    #[test]
    fn grid_needs_two_functions() {
        assert!(init_grid(0.0, 1.0, 1, MfFamily::Gaussian).is_err());
        assert!(init_grid(1.0, 1.0, 3, MfFamily::Gaussian).is_err());
    }

    #[test]
    fn repair_clamps_and_sorts() {
        let mut g = MembershipFunction::gaussian(0.0, 1.0).unwrap();
        g.params_mut()[1] = -3.0;
        g.repair(1e-3);
        assert_eq!(g.params()[1], 1e-3);
        let mut t = MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap();
        t.params_mut()[0] = 1.5;
        t.repair(1e-3);
        assert_eq!(t.params(), &[1.0, 1.5, 2.0]);
    }

    #[test]
    fn serializes_with_short_notation() {
        let g = MembershipFunction::gaussian(1.0, 2.0).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"family":"gaussmf","params":[1.0,2.0]}"#);
        let bad = r#"{"family":"gaussmf","params":[1.0,-2.0]}"#;
        assert!(serde_json::from_str::<MembershipFunction>(bad).is_err());
    }
}
