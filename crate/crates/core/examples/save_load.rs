//! Trains a small model, writes it as JSON, reads it back and confirms the
//! predictions are bit-for-bit identical.
//!
//! ```bash
//! cargo run -p anfis --example save_load
//! ```

use anfis::data::{synth_benchmark, GridSpec};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{fit, TrainConfig};

fn main() -> anfis::Result<()> {
    let data = synth_benchmark(GridSpec::default())?;
    let model = AnfisModel::grid(&data.input_ranges()?, 2, MfFamily::GeneralizedBell, SugenoOrder::First)?;
    let cfg = TrainConfig { eta0: 0.02, max_epochs: 20, checking: None, ..TrainConfig::default() };
    let (model, _) = fit(model, &data, &data, &cfg)?;

    let path = std::env::temp_dir().join("anfis_save_load_example.json");
    model.save(&path)?;
    let back = AnfisModel::load(&path)?;
    let a = model.predict_batch(data.inputs())?;
    let b = back.predict_batch(data.inputs())?;
    let same = a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits());
    println!("wrote {} ({} bytes); predictions identical: {same}", path.display(), std::fs::metadata(&path).map_or(0, |m| m.len()));
    Ok(())
}
