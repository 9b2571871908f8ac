//! Long run on a small noisy training set with the checking error
//! monitored but no early stop; reports where the checking error bottoms out
//! and what early stopping would have returned.
//!
//! ```bash
//! cargo run -p anfis --example overfit_trace
//! ```

use anfis::data::Dataset;
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, CheckPolicy, TrainConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn noisy(rows: usize, seed: u64) -> anfis::Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inputs = Vec::new();
    let mut targets = Vec::new();
    for _ in 0..rows {
        let (a, b) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        inputs.extend([a, b]);
        targets.push((4.0f64 * a).sin() * (3.0f64 * b).cos() + rng.random_range(-0.2..0.2));
    }
    Dataset::new(vec!["a".into(), "b".into()], "y", inputs, targets)
}

fn main() -> anfis::Result<()> {
    let train = noisy(60, 1)?;
    let check = noisy(300, 2)?;
    let model = AnfisModel::grid(&train.input_ranges()?, 5, MfFamily::Gaussian, SugenoOrder::Zero)?;

    let monitor = TrainConfig {
        eta0: 0.01,
        max_epochs: 1000,
        error_goal: 0.0,
        checking: Some(CheckPolicy { every: 10, patience: None }),
        ..TrainConfig::default()
    };
    let (_, trace) = fit(model.clone(), &train, &check, &monitor)?;
    for (epoch, c) in trace.check_points().iter().filter(|(e, _)| e % 100 == 0 || *e == 10) {
        let t = trace.record(*epoch).map_or(f64::NAN, |r| r.train_rmse_std);
        println!("epoch {epoch:>5}  train {t:.5}  check {c:.5}");
    }
    if let Some((epoch, cost)) = trace.check_argmin() {
        println!("checking minimum at epoch {epoch} (cost form {cost:.5}); run ended at {}", trace.epochs_run());
    }

    let stopping = TrainConfig { checking: Some(CheckPolicy { every: 10, patience: Some(3) }), ..monitor };
    let (_, early) = fit(model, &train, &check, &stopping)?;
    println!("with patience 3: stopped at epoch {} ({}), returned epoch {}", early.epochs_run(), early.stopped_reason, early.best_epoch);
    Ok(())
}
