//! One least-squares solve for the consequents plus one gradient step on the
//! membership parameters per epoch, both over the full batch.
//!
//! The premise gradient is taken of the rooted cost
//! `E = sqrt(sum_k (y_k - yhat_k)^2 / (2P))`, so
//! `dE/dtheta = -(1 / (2 P E)) * sum_k e_k * dyhat_k/dtheta`.

use std::time::Instant;

use rayon::prelude::*;

use crate::data::Dataset;
use crate::error::{AnfisError, Result};
use crate::lse::lse_solve;
use crate::metrics::{rmse, RmseForm};
use crate::model::{normalize, AnfisModel, FIRING_GUARD};
use crate::train::config::TrainConfig;
use crate::train::schedule::EtaSchedule;
use crate::train::trace::{EpochRecord, StopReason, TrainTrace};

/// Below this cost the gradient is reported as zero.
pub const COST_GUARD: f64 = 1e-12;

fn check_dims(model: &AnfisModel, data: &Dataset) -> Result<()> {
    if data.n_inputs() != model.n_inputs() {
        return Err(AnfisError::Shape(format!(
            "dataset has {} inputs, model expects {}",
            data.n_inputs(),
            model.n_inputs()
        )));
    }
    if data.is_empty() {
        return Err(AnfisError::Config("dataset is empty".into()));
    }
    Ok(())
}

/// Row-major `P x M` regressor matrix at the current premise parameters.
pub fn design_matrix(model: &AnfisModel, data: &Dataset) -> Result<Vec<f64>> {
    check_dims(model, data)?;
    let m = model.linear_param_count();
    let mut design = vec![0.0; data.len() * m];
    design
        .par_chunks_mut(m)
        .zip(data.inputs().par_chunks(data.n_inputs()))
        .try_for_each(|(out, x)| model.design_row_into(x, out))?;
    Ok(design)
}

/// Replaces the consequents by the least-squares optimum for `data`.
pub fn lse_step(model: &mut AnfisModel, data: &Dataset) -> Result<()> {
    let design = design_matrix(model, data)?;
    let theta = lse_solve(&design, data.len(), model.linear_param_count(), data.targets())?;
    model.set_linear_params(&theta)
}

/// Gradient of the rooted cost with respect to every premise parameter,
/// laid out like [`AnfisModel::premise_params`].
pub fn premise_gradient(model: &AnfisModel, data: &Dataset) -> Result<Vec<f64>> {
    check_dims(model, data)?;
    let n = model.n_inputs();
    let rules = model.rule_count();
    let table = model.rule_table();

    // offset of each (input, mf) block in the flat parameter vector
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for v in model.inputs() {
        let mut per = Vec::with_capacity(v.mfs.len());
        for mf in &v.mfs {
            per.push(total);
            total += mf.params().len();
        }
        offsets.push(per);
    }

    let mut grad_sum = vec![0.0; total];
    let mut dmu = vec![0.0; total];
    let mut mu: Vec<Vec<f64>> = model.inputs().iter().map(|v| vec![0.0; v.mfs.len()]).collect();
    let mut dy_dmu: Vec<Vec<f64>> = mu.clone();
    let mut firing = vec![0.0; rules];
    let mut outputs = vec![0.0; rules];
    let mut sse = 0.0;

    for (x, y) in data.rows() {
        for (j, v) in model.inputs().iter().enumerate() {
            for (k, mf) in v.mfs.iter().enumerate() {
                let off = offsets[j][k];
                let len = mf.params().len();
                mu[j][k] = mf.eval_with_gradients(x[j], &mut dmu[off..off + len]);
            }
        }
        for (i, w) in firing.iter_mut().enumerate() {
            let idx = &table[i * n..(i + 1) * n];
            *w = idx.iter().enumerate().map(|(j, &k)| mu[j][k]).product();
            outputs[i] = model.rule_output(i, x);
        }
        let normalized = normalize(&firing);
        let yhat: f64 = normalized.iter().zip(&outputs).map(|(a, b)| a * b).sum();
        let err = y - yhat;
        sse += err * err;

        let s: f64 = firing.iter().sum();
        if s < FIRING_GUARD {
            continue;
        }
        for row in dy_dmu.iter_mut() {
            row.fill(0.0);
        }
        for i in 0..rules {
            let coef = (outputs[i] - yhat) / s;
            if coef == 0.0 {
                continue;
            }
            let idx = &table[i * n..(i + 1) * n];
            for j in 0..n {
                let others: f64 = idx
                    .iter()
                    .enumerate()
                    .filter(|&(jj, _)| jj != j)
                    .map(|(jj, &k)| mu[jj][k])
                    .product();
                dy_dmu[j][idx[j]] += coef * others;
            }
        }
        for (j, v) in model.inputs().iter().enumerate() {
            for (k, mf) in v.mfs.iter().enumerate() {
                let off = offsets[j][k];
                let scale = err * dy_dmu[j][k];
                for q in 0..mf.params().len() {
                    grad_sum[off + q] += scale * dmu[off + q];
                }
            }
        }
    }

    let p = data.len() as f64;
    let cost = (sse / (2.0 * p)).sqrt();
    if !cost.is_finite() {
        return Err(AnfisError::Numeric("cost is not finite".into()));
    }
    if cost < COST_GUARD {
        return Ok(vec![0.0; total]);
    }
    let factor = -1.0 / (2.0 * p * cost);
    Ok(grad_sum.into_iter().map(|g| g * factor).collect())
}

/// `theta -= eta * grad` on every premise parameter, then width clamping
/// and breakpoint re-ordering.
pub fn gd_step(model: &mut AnfisModel, grad: &[f64], eta: f64, sigma_min_scale: f64) -> Result<()> {
    if grad.len() != model.premise_param_count() {
        return Err(AnfisError::Shape(format!(
            "gradient has {} entries, model has {} premise parameters",
            grad.len(),
            model.premise_param_count()
        )));
    }
    let mut g = grad.iter();
    for v in model.inputs_mut() {
        let sigma_min = v.sigma_min(sigma_min_scale);
        for mf in v.mfs.iter_mut() {
            for p in mf.params_mut() {
                *p -= eta * g.next().copied().unwrap_or(0.0);
            }
            mf.repair(sigma_min);
        }
    }
    Ok(())
}

/// Errors of one epoch, measured after the least-squares step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpochErrors {
    pub rmse_cost: f64,
    pub rmse_std: f64,
}

fn errors(model: &AnfisModel, data: &Dataset) -> Result<EpochErrors> {
    let pred = model.predict_batch(data.inputs())?;
    Ok(EpochErrors {
        rmse_cost: rmse(data.targets(), &pred, RmseForm::Cost)?,
        rmse_std: rmse(data.targets(), &pred, RmseForm::Standard)?,
    })
}

/// One hybrid epoch: least squares, error measurement, one premise step.
pub fn train_epoch(
    model: &mut AnfisModel,
    train: &Dataset,
    eta: f64,
    sigma_min_scale: f64,
) -> Result<EpochErrors> {
    lse_step(model, train)?;
    let errs = errors(model, train)?;
    let grad = premise_gradient(model, train)?;
    gd_step(model, &grad, eta, sigma_min_scale)?;
    Ok(errs)
}

fn premises_finite(model: &AnfisModel) -> bool {
    model.premise_params().iter().all(|v| v.is_finite())
}

/// Runs hybrid epochs and returns the best snapshot with its trace.
///
/// With checking enabled the snapshot minimizing the checking cost among
/// evaluated epochs is returned; otherwise (or before the first evaluation)
/// the one minimizing the training cost. Snapshots are taken after the
/// least-squares step of their epoch.
pub fn fit(
    mut model: AnfisModel,
    train: &Dataset,
    check: &Dataset,
    cfg: &TrainConfig,
) -> Result<(AnfisModel, TrainTrace)> {
    cfg.validate()?;
    check_dims(&model, train)?;
    if cfg.checking.is_some() {
        check_dims(&model, check)?;
    }

    let mut schedule = EtaSchedule::new(cfg.eta0, cfg.eta_policy);
    let mut records = Vec::new();
    let mut best_train: Option<(f64, usize, AnfisModel)> = None;
    let mut best_check: Option<(f64, usize, AnfisModel)> = None;
    let mut last_check: Option<f64> = None;
    let mut rises = 0usize;
    let mut stopped = StopReason::MaxEpochs;

    for epoch in 1..=cfg.max_epochs {
        let started = Instant::now();
        let eta = schedule.current();

        if lse_step(&mut model, train).is_err() {
            stopped = StopReason::Diverged;
            break;
        }
        let errs = match errors(&model, train) {
            Ok(e) if e.rmse_cost.is_finite() => e,
            _ => {
                stopped = StopReason::Diverged;
                break;
            }
        };

        let mut check_errs = None;
        if let Some(policy) = cfg.checking {
            if epoch % policy.every == 0 {
                match errors(&model, check) {
                    Ok(e) if e.rmse_cost.is_finite() => check_errs = Some(e),
                    _ => {
                        stopped = StopReason::Diverged;
                        break;
                    }
                }
            }
        }

        if best_train.as_ref().is_none_or(|b| errs.rmse_cost < b.0) {
            best_train = Some((errs.rmse_cost, epoch, model.clone()));
        }
        let mut stop = None;
        if let (Some(c), Some(policy)) = (check_errs, cfg.checking) {
            if best_check.as_ref().is_none_or(|b| c.rmse_cost < b.0) {
                best_check = Some((c.rmse_cost, epoch, model.clone()));
            }
            match last_check {
                Some(prev) if c.rmse_cost > prev => rises += 1,
                _ => rises = 0,
            }
            last_check = Some(c.rmse_cost);
            if policy.patience.is_some_and(|p| rises >= p.max(1)) {
                stop = Some(StopReason::EarlyStop);
            }
        }
        if errs.rmse_cost < cfg.error_goal {
            stop = Some(StopReason::ErrorGoal);
        }

        if stop.is_none() {
            let stepped = premise_gradient(&model, train)
                .and_then(|g| gd_step(&mut model, &g, eta, cfg.sigma_min_scale));
            if stepped.is_err() || !premises_finite(&model) {
                stop = Some(StopReason::Diverged);
            }
            schedule.observe(errs.rmse_cost);
        }

        records.push(EpochRecord {
            epoch,
            train_rmse_cost: errs.rmse_cost,
            train_rmse_std: errs.rmse_std,
            check_rmse_cost: check_errs.map(|c| c.rmse_cost),
            check_rmse_std: check_errs.map(|c| c.rmse_std),
            eta,
            seconds: started.elapsed().as_secs_f64(),
        });
        if let Some(reason) = stop {
            stopped = reason;
            break;
        }
    }

    let (best_epoch, best_model) = match best_check.or(best_train) {
        Some((_, epoch, snapshot)) => (epoch, snapshot),
        None => (0, model),
    };
    Ok((
        best_model,
        TrainTrace {
            records,
            best_epoch,
            stopped_reason: stopped,
        },
    ))
}
