#![allow(dead_code)]

use anfis::data::Dataset;
use anfis::mf::{FuzzyVariable, MembershipFunction, MfFamily};
use anfis::model::{AnfisModel, SugenoOrder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid model over `[0, 1]^n` with jittered premises and random consequents.
pub fn random_model(
    rng: &mut ChaCha8Rng,
    n: usize,
    mfs: usize,
    family: MfFamily,
    order: SugenoOrder,
) -> AnfisModel {
    let inputs = (0..n)
        .map(|j| {
            let grid = FuzzyVariable::grid(format!("in{j}"), 0.0, 1.0, mfs, family).unwrap();
            let mfs = grid
                .mfs
                .iter()
                .map(|mf| jitter(rng, mf))
                .collect();
            FuzzyVariable::new(format!("in{j}"), 0.0, 1.0, mfs).unwrap()
        })
        .collect();
    let mut model = AnfisModel::new(inputs, order).unwrap();
    let rules = model.rule_count();
    let mut cons = Vec::with_capacity(rules * (n + 1));
    for _ in 0..rules {
        for _ in 0..n {
            cons.push(match order {
                SugenoOrder::First => rng.random_range(-2.0..2.0),
                SugenoOrder::Zero => 0.0,
            });
        }
        cons.push(rng.random_range(-2.0..2.0));
    }
    model.set_consequents(cons).unwrap();
    model
}

/// Perturbs parameters by up to 5% of their magnitude, keeping validity.
pub fn jitter(rng: &mut ChaCha8Rng, mf: &MembershipFunction) -> MembershipFunction {
    loop {
        let params: Vec<f64> = mf
            .params()
            .iter()
            .map(|&p| p + 0.05 * rng.random_range(-1.0..1.0) * p.abs().max(0.05))
            .collect();
        if let Ok(m) = MembershipFunction::new(mf.family(), params) {
            return m;
        }
    }
}

pub fn random_dataset(rng: &mut ChaCha8Rng, n: usize, rows: usize, f: impl Fn(&[f64]) -> f64) -> Dataset {
    let mut inputs = Vec::with_capacity(n * rows);
    let mut targets = Vec::with_capacity(rows);
    for _ in 0..rows {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        targets.push(f(&x));
        inputs.extend(x);
    }
    let names = (0..n).map(|j| format!("in{j}")).collect();
    Dataset::new(names, "y", inputs, targets).unwrap()
}

/// Same model with its premise parameters replaced.
pub fn with_premises(model: &AnfisModel, premises: &[f64]) -> AnfisModel {
    let mut it = premises.iter().copied();
    let inputs = model
        .inputs()
        .iter()
        .map(|v| {
            let mfs = v
                .mfs
                .iter()
                .map(|mf| {
                    let p: Vec<f64> = it.by_ref().take(mf.params().len()).collect();
                    MembershipFunction::new(mf.family(), p).unwrap()
                })
                .collect();
            FuzzyVariable::new(v.name.clone(), v.lo, v.hi, mfs).unwrap()
        })
        .collect();
    let mut out = AnfisModel::new(inputs, model.order()).unwrap();
    out.set_consequents(model.consequents().to_vec()).unwrap();
    out
}
