//! Same budget for every membership family at zero and first order on the
//! substitute benchmark.
//!
//! ```bash
//! cargo run -p anfis --example compare_mfs
//! ```

use anfis::data::{synth_benchmark, GridSpec};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, StopReason, TrainConfig};

fn main() -> anfis::Result<()> {
    let data = synth_benchmark(GridSpec::default())?;
    let cfg = TrainConfig { eta0: 0.01, max_epochs: 100, error_goal: 0.0, checking: None, ..TrainConfig::default() };
    println!("{:<10} {:>12} {:>12}", "family", "zero order", "first order");
    for family in MfFamily::ALL {
        let mut cells = Vec::new();
        for order in [SugenoOrder::Zero, SugenoOrder::First] {
            let model = AnfisModel::grid(&data.input_ranges()?, 3, family, order)?;
            let (_, trace) = fit(model, &data, &data, &cfg)?;
            cells.push(match trace.stopped_reason {
                StopReason::Diverged => "diverged".to_string(),
                _ => format!("{:.5}", trace.train_rmse_std().iter().copied().fold(f64::INFINITY, f64::min)),
            });
        }
        println!("{:<10} {:>12} {:>12}", family.to_string(), cells[0], cells[1]);
    }
    Ok(())
}
