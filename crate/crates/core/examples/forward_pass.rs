//! Builds a two-input, nine-rule first-order model by hand and prints each
//! layer of one forward evaluation.
//!
//! ```bash
//! cargo run -p anfis --example forward_pass
//! ```

use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};

fn main() -> anfis::Result<()> {
    let ranges = vec![("temperature".to_string(), 0.0, 40.0), ("pressure".to_string(), 990.0, 1030.0)];
    let mut model = AnfisModel::grid(&ranges, 3, MfFamily::Gaussian, SugenoOrder::First)?;

    // rule i: y = 0.1 * i * temperature - 0.01 * pressure + i
    let consequents: Vec<f64> = (0..model.rule_count())
        .flat_map(|i| [0.1 * i as f64, -0.01, i as f64])
        .collect();
    model.set_consequents(consequents)?;

    let x = [18.0, 1012.0];
    let rec = model.forward(&x)?;
    println!("input {x:?}");
    println!("memberships {:?}", model.memberships(&x)?);
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "rule", "sets", "firing", "normalized", "output");
    let table = model.rule_table();
    for i in 0..model.rule_count() {
        println!(
            "{i:>4} {:>10} {:>10.5} {:>10.5} {:>10.4}",
            format!("{:?}", &table[i * 2..i * 2 + 2]),
            rec.firing[i],
            rec.normalized[i],
            rec.rule_outputs[i]
        );
    }
    println!("crisp output {:.6}", rec.output);
    println!("design row . linear params = {:.6}", {
        let row = model.design_row(&x)?;
        row.iter().zip(model.linear_params()).map(|(a, b)| a * b).sum::<f64>()
    });
    Ok(())
}
