//! Training curves under fixed, step-decay and adaptive learning rates on
//! the Mackey-Glass rows.
//!
//! ```bash
//! cargo run -p anfis --example lr_sweep
//! ```

use anfis::data::{embed_default, mackey_glass, MgConfig};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, EtaPolicy, TrainConfig};

fn main() -> anfis::Result<()> {
    let rows = embed_default(&mackey_glass(MgConfig::default())?.integer_samples())?;
    let train = rows.slice(0, 630)?;
    let model = AnfisModel::grid(&train.input_ranges()?, 3, MfFamily::Gaussian, SugenoOrder::First)?;

    let runs = [
        ("fixed 0.002", EtaPolicy::Fixed, 0.002),
        ("fixed 0.02", EtaPolicy::Fixed, 0.02),
        ("step 0.8 every 5 from 0.05", EtaPolicy::StepDecay { factor: 0.8, every: 5 }, 0.05),
        ("adaptive from 0.002", EtaPolicy::ADAPTIVE_DEFAULT, 0.002),
    ];
    println!("{:<28} {:>10} {:>10} {:>10} {:>10}", "policy", "epoch 1", "epoch 50", "epoch 200", "final eta");
    for (label, policy, eta0) in runs {
        let cfg = TrainConfig { eta0, eta_policy: policy, max_epochs: 200, error_goal: 0.0, checking: None, ..TrainConfig::default() };
        let (_, trace) = fit(model.clone(), &train, &train, &cfg)?;
        let at = |e: usize| trace.record(e).map_or(f64::NAN, |r| r.train_rmse_std);
        let last_eta = trace.records.last().map_or(f64::NAN, |r| r.eta);
        println!("{label:<28} {:>10.6} {:>10.6} {:>10.6} {:>10.5}", at(1), at(50), at(200), last_eta);
    }
    Ok(())
}
