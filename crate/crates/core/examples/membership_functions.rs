//! Evaluates every membership family on a three-set grid over `[0, 10]`
//! and prints degrees and parameter gradients.
//!
//! ```bash
//! cargo run -p anfis --example membership_functions
//! ```

use anfis::mf::{FuzzyVariable, MembershipFunction, MfFamily};

fn main() -> anfis::Result<()> {
    for family in MfFamily::ALL {
        let var = FuzzyVariable::grid("x", 0.0, 10.0, 3, family)?;
        println!("{family}");
        for (k, mf) in var.mfs.iter().enumerate() {
            let degrees: Vec<String> = [0.0, 2.5, 5.0, 7.5, 10.0]
                .iter()
                .map(|&x| format!("{:.3}", mf.eval(x)))
                .collect();
            println!("  set {k} params {:?}\n    degrees at 0, 2.5, 5, 7.5, 10: {}", mf.params(), degrees.join(" "));
        }
    }

    let g = MembershipFunction::gaussian(0.0, 1.0)?;
    println!("\ngaussmf(c=0, sigma=1) at x=1: degree {:.6}, d/dc and d/dsigma {:?}", g.eval(1.0), g.param_gradients(1.0));
    let t = MembershipFunction::triangular(0.0, 1.0, 2.0)?;
    println!("trimf(0, 1, 2) at its peak: gradients {:?}", t.param_gradients(1.0));
    println!("as JSON: {}", serde_json::to_string(&g).expect("serializable"));
    Ok(())
}
