//! Combined-cycle power-plant regression: ambient temperature, exhaust
//! vacuum, ambient pressure and relative humidity predicting net output.
//!
//! Takes a CSV with columns `AT,V,AP,RH,PE` (the UCI repository file saved
//! as CSV). Draws 1574 rows with a seeded shuffle and splits them 1259/315.
//!
//! ```bash
//! cargo run -p anfis --example power_plant -- path/to/ccpp.csv [seed] [out_dir]
//! ```

use std::path::PathBuf;

use anfis::data::{load_csv, split};
use anfis::metrics::{evaluate, parity_export, r_squared};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, TrainConfig};

fn main() -> anfis::Result<()> {
    let mut args = std::env::args().skip(1);
    let Some(path) = args.next() else {
        eprintln!("usage: power_plant <ccpp.csv> [seed] [out_dir]");
        std::process::exit(2);
    };
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let out_dir = args.next().map(PathBuf::from);

    let inputs: Vec<String> = ["AT", "V", "AP", "RH"].iter().map(|s| s.to_string()).collect();
    let all = load_csv(&path, &inputs, "PE")?;
    let subset = all.shuffled(seed).slice(0, all.len().min(1574))?;
    let (train, check) = split(&subset, 0.8, seed)?;
    println!("{} rows read, training on {}, checking on {}", all.len(), train.len(), check.len());

    let model = AnfisModel::grid(&train.input_ranges()?, 3, MfFamily::Gaussian, SugenoOrder::First)?;
    println!("{} rules, {} linear and {} premise parameters", model.rule_count(), model.linear_param_count(), model.premise_param_count());
    let cfg = TrainConfig { seed, ..TrainConfig::default() };
    let (best, trace) = fit(model, &train, &check, &cfg)?;

    let tp = best.predict_batch(train.inputs())?;
    let cp = best.predict_batch(check.inputs())?;
    let tr = evaluate(train.targets(), &tp)?;
    let ck = evaluate(check.targets(), &cp)?;
    println!(
        "{} epochs ({}), best epoch {}, {:.3} s/epoch",
        trace.epochs_run(),
        trace.stopped_reason,
        trace.best_epoch,
        trace.mean_epoch_seconds()
    );
    println!("train rmse {:.4}  check rmse {:.4}", tr.rmse_std, ck.rmse_std);
    let obs = [train.targets(), check.targets()].concat();
    let pred = [tp, cp].concat();
    println!("combined R^2 {:.4}", r_squared(&obs, &pred)?);

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| anfis::AnfisError::Io { path: dir.clone(), source: e })?;
        parity_export(&obs, &pred, dir.join("parity.csv"))?;
        trace.write_csv(dir.join("trace.csv"))?;
        best.save(dir.join("model.json"))?;
    }
    Ok(())
}
