//! Fits the three-variable substitute benchmark on its 6x6x6 grid with two
//! sets per input.
//!
//! ```bash
//! cargo run -p anfis --example synth_benchmark
//! ```

use anfis::data::{synth_benchmark, GridSpec, SYNTH_NOTE};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, TrainConfig};

fn main() -> anfis::Result<()> {
    println!("{SYNTH_NOTE}");
    let data = synth_benchmark(GridSpec::default())?;
    let model = AnfisModel::grid(&data.input_ranges()?, 2, MfFamily::Gaussian, SugenoOrder::First)?;
    let cfg = TrainConfig { eta0: 0.05, max_epochs: 300, error_goal: 0.0, checking: None, ..TrainConfig::default() };
    let (_, trace) = fit(model, &data, &data, &cfg)?;
    for r in trace.records.iter().filter(|r| r.epoch == 1 || r.epoch % 50 == 0) {
        println!("epoch {:>4}  train rmse {:.5}", r.epoch, r.train_rmse_std);
    }
    Ok(())
}
