//! Integrates the Mackey-Glass series, embeds it as `x(t-12), x(t-6), x(t)`
//! predicting `x(t+6)`, and trains on 630 rows, checking on the next 370.
//!
//! ```bash
//! cargo run -p anfis --example mackey_glass
//! cargo run -p anfis --example mackey_glass -- /tmp/mg   # also write CSVs
//! ```

use std::path::PathBuf;

use anfis::data::{embed_default, mackey_glass, MgConfig};
use anfis::metrics::{evaluate, parity_export};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, TrainConfig};

fn main() -> anfis::Result<()> {
    let out_dir = std::env::args().nth(1).map(PathBuf::from);

    let series = mackey_glass(MgConfig::default())?;
    let samples = series.integer_samples();
    let rows = embed_default(&samples)?;
    let train = rows.slice(0, 630)?;
    let check = rows.slice(630, 1000)?;
    println!("{} samples, {} embedded rows", samples.len(), rows.len());

    let model = AnfisModel::grid(&train.input_ranges()?, 3, MfFamily::Gaussian, SugenoOrder::First)?;
    let cfg = TrainConfig { eta0: 0.01, max_epochs: 500, ..TrainConfig::default() };
    let (best, trace) = fit(model, &train, &check, &cfg)?;

    let pred = best.predict_batch(check.inputs())?;
    let report = evaluate(check.targets(), &pred)?;
    println!(
        "{} epochs ({}), best epoch {}, {:.2} ms/epoch",
        trace.epochs_run(),
        trace.stopped_reason,
        trace.best_epoch,
        1e3 * trace.mean_epoch_seconds()
    );
    println!("check rmse {:.5} (cost form {:.5}), R^2 {:.5}", report.rmse_std, report.rmse_cost, report.r_squared.unwrap_or(f64::NAN));

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| anfis::AnfisError::Io { path: dir.clone(), source: e })?;
        series.save_csv(dir.join("series.csv"))?;
        rows.save_csv(dir.join("rows.csv"))?;
        trace.write_csv(dir.join("trace.csv"))?;
        parity_export(check.targets(), &pred, dir.join("parity.csv"))?;
        best.save(dir.join("model.json"))?;
        println!("wrote series, rows, trace, parity and model to {}", dir.display());
    }
    Ok(())
}
