use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::data::{self, embed, load_series_csv, mackey_glass, MgConfig};
use crate::error::{AnfisError, Result};
use crate::metrics::{evaluate, parity_export, r_squared, EvalReport};
use crate::mf::MfFamily;
use crate::model::{AnfisModel, SugenoOrder};
use crate::train::{fit, CheckPolicy, EtaPolicy, StopReason, TrainConfig, TrainTrace};

use super::{
    CompareArgs, EmbedArgs, EvaluateArgs, GenMgArgs, OverfitArgs, PredictArgs, SweepArgs, TrainArgs,
};

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| AnfisError::Model(e.to_string()))?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| AnfisError::io(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

pub fn cmd_gen_mg(a: &GenMgArgs) -> Result<()> {
    let series = mackey_glass(MgConfig {
        tau: a.tau,
        horizon: a.horizon,
        step: a.step,
        x0: a.x0,
    })?;
    series.save_csv(&a.out)
}

pub fn cmd_embed(a: &EmbedArgs) -> Result<()> {
    let samples = load_series_csv(&a.series)?;
    embed(&samples, &a.lags, a.horizon)?.save_csv(&a.out)
}

#[derive(Clone, Debug, Serialize)]
pub struct TrainReport {
    pub train: EvalReport,
    pub check: Option<EvalReport>,
    /// Over training and checking rows together.
    pub combined_r_squared: Option<f64>,
    pub epochs_run: usize,
    pub mean_epoch_seconds: f64,
    pub best_epoch: usize,
    pub stopped_reason: StopReason,
    pub rules: usize,
    pub linear_params: usize,
    pub premise_params: usize,
}

fn predictions(model: &AnfisModel, ds: &data::Dataset) -> Result<Vec<f64>> {
    model.predict_batch(ds.inputs())
}

/// Trains, writes the requested artifacts and returns the model, trace and report.
pub fn cmd_train(a: &TrainArgs) -> Result<(AnfisModel, TrainTrace, TrainReport)> {
    let (train, check) = a.data.load()?;
    let model = a.model.build(&train)?;
    let mut cfg = a.fit.config(a.data.seed);
    if check.is_empty() {
        cfg.checking = None;
    }
    let (model, trace) = fit(model, &train, &check, &cfg)?;

    let train_pred = predictions(&model, &train)?;
    let train_report = evaluate(train.targets(), &train_pred)?;
    let (check_report, combined) = if check.is_empty() {
        (None, r_squared(train.targets(), &train_pred).ok())
    } else {
        let check_pred = predictions(&model, &check)?;
        let obs = [train.targets(), check.targets()].concat();
        let pred = [train_pred.as_slice(), check_pred.as_slice()].concat();
        if let Some(p) = &a.out_parity {
            parity_export(&obs, &pred, p)?;
        }
        (Some(evaluate(check.targets(), &check_pred)?), r_squared(&obs, &pred).ok())
    };
    if check.is_empty() {
        if let Some(p) = &a.out_parity {
            parity_export(train.targets(), &train_pred, p)?;
        }
    }

    let report = TrainReport {
        train: train_report,
        check: check_report,
        combined_r_squared: combined,
        epochs_run: trace.epochs_run(),
        mean_epoch_seconds: trace.mean_epoch_seconds(),
        best_epoch: trace.best_epoch,
        stopped_reason: trace.stopped_reason,
        rules: model.rule_count(),
        linear_params: model.linear_param_count(),
        premise_params: model.premise_param_count(),
    };
    if let Some(p) = &a.out_model {
        model.save(p)?;
    }
    if let Some(p) = &a.out_trace {
        trace.write_csv(p)?;
    }
    write_json(a.out_report.as_deref(), &report)?;
    Ok((model, trace, report))
}

/// Writes `row,prediction` for every row of the input CSV.
pub fn cmd_predict(a: &PredictArgs) -> Result<()> {
    let model = AnfisModel::load(&a.model)?;
    let names: Vec<String> = model.inputs().iter().map(|v| v.name.clone()).collect();
    let inputs = data::load_inputs_csv(&a.data, &names)?;
    let pred = model.predict_batch(&inputs)?;
    let path = a.out.as_path();
    let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
    w.write_record(["row", "prediction"]).map_err(|e| AnfisError::csv(path, e))?;
    for (i, p) in pred.iter().enumerate() {
        w.write_record([i.to_string(), p.to_string()])
            .map_err(|e| AnfisError::csv(path, e))?;
    }
    w.flush().map_err(|e| AnfisError::io(path, e))
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<EvalReport> {
    let model = AnfisModel::load(&a.model)?;
    let names: Vec<String> = model.inputs().iter().map(|v| v.name.clone()).collect();
    let ds = data::load_csv(&a.data, &names, &a.target)?;
    let pred = predictions(&model, &ds)?;
    let report = evaluate(ds.targets(), &pred)?;
    if let Some(p) = &a.out_parity {
        parity_export(ds.targets(), &pred, p)?;
    }
    write_json(a.out_report.as_deref(), &report)?;
    Ok(report)
}

/// One cell of the family/order table. `None` marks a diverged run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub family: MfFamily,
    pub order: SugenoOrder,
    pub train_rmse_std: Option<f64>,
}

fn budget(eta0: f64, eta_policy: EtaPolicy, max_epochs: usize, checking: Option<CheckPolicy>, seed: u64) -> TrainConfig {
    TrainConfig {
        eta0,
        eta_policy,
        max_epochs,
        error_goal: 0.0,
        checking,
        seed,
        ..TrainConfig::default()
    }
}

pub fn cmd_compare_mfs(a: &CompareArgs) -> Result<Vec<CompareRow>> {
    let (train, check) = a.data.load()?;
    let ranges = train.input_ranges()?;
    let cfg = budget(a.eta, EtaPolicy::Fixed, a.epochs, None, a.data.seed);
    let cells: Vec<(MfFamily, SugenoOrder)> = MfFamily::ALL
        .iter()
        .flat_map(|&f| [(f, SugenoOrder::Zero), (f, SugenoOrder::First)])
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(family, order)| -> Result<CompareRow> {
            let model = AnfisModel::grid(&ranges, a.mfs_per_input, family, order)?;
            let (model, trace) = fit(model, &train, &check, &cfg)?;
            let train_rmse_std = match trace.stopped_reason {
                StopReason::Diverged => None,
                _ => Some(evaluate(train.targets(), &predictions(&model, &train)?)?.rmse_std),
            };
            Ok(CompareRow { family, order, train_rmse_std })
        })
        .collect::<Result<Vec<_>>>()?;

    let path = a.out.as_path();
    let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
    w.write_record(["family", "order", "train_rmse_std"])
        .map_err(|e| AnfisError::csv(path, e))?;
    for r in &rows {
        let value = r.train_rmse_std.map_or_else(|| "diverged".to_string(), |v| v.to_string());
        w.write_record([r.family.to_string(), r.order.to_string(), value])
            .map_err(|e| AnfisError::csv(path, e))?;
    }
    w.flush().map_err(|e| AnfisError::io(path, e))?;
    Ok(rows)
}

/// Parses `ETA` or `POLICY@ETA`.
pub fn parse_sweep_entry(entry: &str) -> Result<(EtaPolicy, f64)> {
    let entry = entry.trim();
    let (policy, eta) = match entry.rsplit_once('@') {
        Some((p, e)) => (p.parse::<EtaPolicy>()?, e),
        None => (EtaPolicy::Fixed, entry),
    };
    let eta: f64 = eta
        .trim()
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite() && *v >= 0.0)
        .ok_or_else(|| AnfisError::Config(format!("bad learning rate in sweep entry {entry:?}")))?;
    Ok((policy, eta))
}

#[derive(Clone, Debug)]
pub struct SweepRun {
    pub label: String,
    pub policy: EtaPolicy,
    pub eta0: f64,
    pub trace: TrainTrace,
}

impl SweepRun {
    pub fn diverged(&self) -> bool {
        self.trace.stopped_reason == StopReason::Diverged
    }

    /// `(epoch, train_rmse_std)` of the lowest training error.
    pub fn best(&self) -> Option<(usize, f64)> {
        self.trace
            .records
            .iter()
            .map(|r| (r.epoch, r.train_rmse_std))
            .fold(None, |best, (e, v)| match best {
                Some((_, b)) if b <= v => best,
                _ => Some((e, v)),
            })
    }
}

pub fn cmd_lr_sweep(a: &SweepArgs) -> Result<Vec<SweepRun>> {
    let entries: Vec<&String> = a.policies.iter().filter(|s| !s.trim().is_empty()).collect();
    if entries.is_empty() {
        return Err(AnfisError::Config("lr-sweep needs at least one --policies entry".into()));
    }
    let parsed = entries
        .iter()
        .map(|e| parse_sweep_entry(e).map(|(p, eta)| (e.trim().to_string(), p, eta)))
        .collect::<Result<Vec<_>>>()?;
    let (train, check) = a.data.load()?;
    let model = a.model.build(&train)?;
    let runs = parsed
        .into_par_iter()
        .map(|(label, policy, eta0)| -> Result<SweepRun> {
            let cfg = budget(eta0, policy, a.epochs, None, a.data.seed);
            let (_, trace) = fit(model.clone(), &train, &check, &cfg)?;
            Ok(SweepRun { label, policy, eta0, trace })
        })
        .collect::<Result<Vec<_>>>()?;

    let path = a.out.as_path();
    let mut w = csv::Writer::from_path(path).map_err(|e| AnfisError::csv(path, e))?;
    w.write_record(["eta_label", "epoch", "train_rmse"])
        .map_err(|e| AnfisError::csv(path, e))?;
    for run in &runs {
        let label = if run.diverged() { format!("{} (diverged)", run.label) } else { run.label.clone() };
        for r in &run.trace.records {
            w.write_record([label.clone(), r.epoch.to_string(), r.train_rmse_std.to_string()])
                .map_err(|e| AnfisError::csv(path, e))?;
        }
    }
    w.flush().map_err(|e| AnfisError::io(path, e))?;
    Ok(runs)
}

#[derive(Clone, Debug, Serialize)]
pub struct OverfitReport {
    pub best_epoch: usize,
    pub best_check_rmse_std: f64,
    pub final_epoch: usize,
    pub final_check_rmse_std: Option<f64>,
    pub first_train_rmse_std: f64,
    pub final_train_rmse_std: f64,
    pub stopped_reason: StopReason,
}

pub fn cmd_overfit_trace(a: &OverfitArgs) -> Result<(OverfitReport, TrainTrace)> {
    let (train, check) = a.data.load()?;
    if check.is_empty() {
        return Err(AnfisError::Config("overfit-trace needs a non-empty checking set".into()));
    }
    let model = a.model.build(&train)?;
    let checking = Some(CheckPolicy { every: a.check_every, patience: None });
    let cfg = budget(a.eta, EtaPolicy::Fixed, a.epochs, checking, a.data.seed);
    let (_, trace) = fit(model, &train, &check, &cfg)?;
    trace.write_csv(&a.out_trace)?;

    let (best_epoch, _) = trace
        .check_argmin()
        .ok_or_else(|| AnfisError::Config("no checking evaluation happened; lower --check-every".into()))?;
    let at = |e: usize| trace.record(e).copied();
    let first = trace.records.first().copied();
    let last = trace.records.last().copied();
    let (Some(first), Some(last), Some(best)) = (first, last, at(best_epoch)) else {
        return Err(AnfisError::Numeric("training produced no epochs".into()));
    };
    let report = OverfitReport {
        best_epoch,
        best_check_rmse_std: best.check_rmse_std.unwrap_or(f64::NAN),
        final_epoch: last.epoch,
        final_check_rmse_std: last.check_rmse_std,
        first_train_rmse_std: first.train_rmse_std,
        final_train_rmse_std: last.train_rmse_std,
        stopped_reason: trace.stopped_reason,
    };
    write_json(a.out_report.as_deref(), &report)?;
    Ok((report, trace))
}
