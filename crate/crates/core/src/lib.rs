//! Adaptive neuro-fuzzy inference: grid-partitioned Takagi-Sugeno rule bases
//! trained with a hybrid of exact least squares (consequents) and gradient
//! descent (membership parameters).
//!
//! ```no_run
//! use anfis::data::{embed_default, mackey_glass, MgConfig};
//! use anfis::model::{AnfisModel, SugenoOrder};
//! use anfis::mf::MfFamily;
//! use anfis::train::{fit, TrainConfig};
//!
//! let series = mackey_glass(MgConfig::default())?;
//! let ds = embed_default(&series.integer_samples())?;
//! let (train, check) = (ds.slice(0, 630)?, ds.slice(630, 1000)?);
//! let model = AnfisModel::grid(&train.input_ranges()?, 3, MfFamily::Gaussian, SugenoOrder::First)?;
//! let (best, trace) = fit(model, &train, &check, &TrainConfig::default())?;
//! println!("best epoch {} of {}", trace.best_epoch, trace.epochs_run());
//! # let _ = best;
//! # Ok::<(), anfis::AnfisError>(())
//! ```

pub mod cli;
pub mod data;
pub mod error;
pub mod lse;
pub mod metrics;
pub mod mf;
pub mod model;
pub mod train;

pub use error::{AnfisError, Result};
