//! Hybrid least-squares / gradient-descent training.

mod config;
mod hybrid;
mod schedule;
mod trace;

pub use config::{CheckPolicy, EtaPolicy, TrainConfig};
pub use hybrid::{
    design_matrix, fit, gd_step, lse_step, premise_gradient, train_epoch, EpochErrors, COST_GUARD,
};
pub use schedule::{adapt_eta, EtaSchedule};
pub use trace::{EpochRecord, StopReason, TrainTrace};
