use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::error::{AnfisError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    ErrorGoal,
    MaxEpochs,
    EarlyStop,
    Diverged,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::ErrorGoal => "error_goal",
            StopReason::MaxEpochs => "max_epochs",
            StopReason::EarlyStop => "early_stop",
            StopReason::Diverged => "diverged",
        })
    }
}

/// One epoch. Training errors are measured right after the least-squares
/// step, before the premise update.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub train_rmse_cost: f64,
    pub train_rmse_std: f64,
    pub check_rmse_cost: Option<f64>,
    pub check_rmse_std: Option<f64>,
    pub eta: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrainTrace {
    pub records: Vec<EpochRecord>,
    /// Epoch of the returned snapshot; 0 if no epoch completed.
    pub best_epoch: usize,
    pub stopped_reason: StopReason,
}

impl TrainTrace {
    pub fn epochs_run(&self) -> usize {
        self.records.len()
    }

    pub fn mean_epoch_seconds(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        self.records.iter().map(|r| r.seconds).sum::<f64>() / self.records.len() as f64
    }

    pub fn train_rmse_std(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.train_rmse_std).collect()
    }

    /// `(epoch, check_rmse_std)` for every evaluated epoch.
    pub fn check_points(&self) -> Vec<(usize, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.check_rmse_std.map(|c| (r.epoch, c)))
            .collect()
    }

    /// Evaluated epoch with the lowest checking error (earliest on ties).
    pub fn check_argmin(&self) -> Option<(usize, f64)> {
        self.records
            .iter()
            .filter_map(|r| r.check_rmse_cost.map(|c| (r.epoch, c)))
            .fold(None, |best: Option<(usize, f64)>, (e, c)| match best {
                Some((_, b)) if b <= c => best,
                _ => Some((e, c)),
            })
    }

    pub fn record(&self, epoch: usize) -> Option<&EpochRecord> {
        self.records.iter().find(|r| r.epoch == epoch)
    }

    /// CSV `epoch,train_rmse,check_rmse,eta,seconds` with conventional RMSE;
    /// `check_rmse` is empty on epochs without a checking evaluation.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
        w.write_record(["epoch", "train_rmse", "check_rmse", "eta", "seconds"])
            .map_err(|e| AnfisError::csv(path, e))?;
        for r in &self.records {
            w.write_record([
                r.epoch.to_string(),
                r.train_rmse_std.to_string(),
                r.check_rmse_std.map(|c| c.to_string()).unwrap_or_default(),
                r.eta.to_string(),
                r.seconds.to_string(),
            ])
            .map_err(|e| AnfisError::csv(path, e))?;
        }
        w.flush().map_err(|e| AnfisError::io(path, e))
    }
}
