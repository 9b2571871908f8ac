use std::fmt;
use std::str::FromStr;

use crate::error::{AnfisError, Result};

/// How the gradient-descent step size evolves across epochs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EtaPolicy {
    Fixed,
    /// Multiply by `factor` after every `every` epochs.
    StepDecay { factor: f64, every: usize },
    /// Pattern rule on the training error: grow after four straight declines,
    /// shrink after two consecutive rise/fall pairs.
    Adaptive { up: f64, down: f64 },
}

impl EtaPolicy {
    pub const ADAPTIVE_DEFAULT: EtaPolicy = EtaPolicy::Adaptive { up: 1.1, down: 0.9 };

    pub fn validate(&self) -> Result<()> {
        match *self {
            EtaPolicy::Fixed => Ok(()),
            EtaPolicy::StepDecay { factor, every } => {
                if factor > 0.0 && factor.is_finite() && every >= 1 {
                    Ok(())
                } else {
                    Err(AnfisError::Config(format!(
                        "step decay needs factor > 0 and every >= 1, got {factor}, {every}"
                    )))
                }
            }
            EtaPolicy::Adaptive { up, down } => {
                if up > 1.0 && up.is_finite() && down > 0.0 && down < 1.0 {
                    Ok(())
                } else {
                    Err(AnfisError::Config(format!(
                        "adaptive rate needs up > 1 and 0 < down < 1, got {up}, {down}"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for EtaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaPolicy::Fixed => f.write_str("fixed"),
            EtaPolicy::StepDecay { factor, every } => write!(f, "step:{factor}:{every}"),
            EtaPolicy::Adaptive { up, down } => write!(f, "adaptive:{up}:{down}"),
        }
    }
}

/// Parses `fixed`, `step:FACTOR:EVERY`, `adaptive` or `adaptive:UP:DOWN`.
impl FromStr for EtaPolicy {
    type Err = AnfisError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| AnfisError::Config(format!("bad number `{v}` in policy `{s}`")))
        };
        let policy = match parts.as_slice() {
            ["fixed"] => EtaPolicy::Fixed,
            ["adaptive"] => EtaPolicy::ADAPTIVE_DEFAULT,
            ["adaptive", up, down] => EtaPolicy::Adaptive {
                up: num(up)?,
                down: num(down)?,
            },
            ["step", factor, every] => EtaPolicy::StepDecay {
                factor: num(factor)?,
                every: every
                    .parse()
                    .map_err(|_| AnfisError::Config(format!("bad epoch count in `{s}`")))?,
            },
            _ => return Err(AnfisError::Config(format!("unknown learning-rate policy `{s}`"))),
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Checking-set evaluation cadence and optional early stop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckPolicy {
    pub every: usize,
    /// Stop once the checking error has risen on this many consecutive
    /// evaluations (0 behaves like 1). `None` only monitors.
    pub patience: Option<usize>,
}

impl Default for CheckPolicy {
    fn default() -> Self {
        CheckPolicy {
            every: 10,
            patience: Some(5),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig {
    pub eta0: f64,
    pub eta_policy: EtaPolicy,
    pub max_epochs: usize,
    /// Stop when the training cost falls below this.
    pub error_goal: f64,
    pub checking: Option<CheckPolicy>,
    pub seed: u64,
    /// Width floor as a fraction of each input's range.
    pub sigma_min_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            eta0: 0.002,
            eta_policy: EtaPolicy::Fixed,
            max_epochs: 1000,
            error_goal: 1e-5,
            checking: Some(CheckPolicy::default()),
            seed: 0,
            sigma_min_scale: 1e-4,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta0 >= 0.0 && self.eta0.is_finite()) {
            return Err(AnfisError::Config(format!("learning rate {} must be >= 0", self.eta0)));
        }
        if self.max_epochs == 0 {
            return Err(AnfisError::Config("max_epochs must be positive".into()));
        }
        if !(self.error_goal >= 0.0) {
            return Err(AnfisError::Config(format!("error goal {} must be >= 0", self.error_goal)));
        }
        if let Some(c) = self.checking {
            if c.every == 0 {
                return Err(AnfisError::Config("check interval must be at least 1".into()));
            }
        }
        if !(self.sigma_min_scale > 0.0 && self.sigma_min_scale < 1.0) {
            return Err(AnfisError::Config(format!(
                "sigma_min_scale {} must lie in (0, 1)",
                self.sigma_min_scale
            )));
        }
        self.eta_policy.validate()
    }
}
