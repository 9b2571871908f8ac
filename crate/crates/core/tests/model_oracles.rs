mod common;

use anfis::mf::{FuzzyVariable, MfFamily};
use anfis::model::{normalize, AnfisModel, SugenoOrder};
use common::{random_model, rng};
use proptest::prelude::*;
use rand::Rng;

/// Direct triple loop over every rule, last input varying fastest.
fn brute_force(model: &AnfisModel, x: &[f64]) -> (Vec<f64>, f64) {
    let v = model.inputs();
    let mut firing = Vec::new();
    let mut outputs = Vec::new();
    let mut rule = 0;
    for a in &v[0].mfs {
        for b in &v[1].mfs {
            for c in &v[2].mfs {
                firing.push(a.eval(x[0]) * b.eval(x[1]) * c.eval(x[2]));
                let p = model.consequent_row(rule);
                outputs.push(p[0] * x[0] + p[1] * x[1] + p[2] * x[2] + p[3]);
                rule += 1;
            }
        }
    }
    let total: f64 = firing.iter().sum();
    let y = firing.iter().zip(&outputs).map(|(w, f)| w * f).sum::<f64>() / total;
    (firing, y)
}

#[test]
fn forward_matches_brute_force_27_rules() {
    let mut r = rng(11);
    for fam in [MfFamily::Gaussian, MfFamily::GeneralizedBell, MfFamily::SigmoidProduct] {
        for _ in 0..50 {
            let model = random_model(&mut r, 3, 3, fam, SugenoOrder::First);
            assert_eq!(model.rule_count(), 27);
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| r.random_range(0.0..1.0)).collect();
                let (firing, y) = brute_force(&model, &x);
                let rec = model.forward(&x).unwrap();
                for (a, b) in rec.firing.iter().zip(&firing) {
                    assert!((a - b).abs() <= 1e-10 * b.abs().max(1e-300), "{a} vs {b}");
                }
                assert!((rec.output - y).abs() < 1e-10, "{} vs {y}", rec.output);
                assert_eq!(model.predict(&x).unwrap(), rec.output);
            }
        }
    }
}

#[test]
fn prediction_is_design_row_dot_linear_params() {
    let mut r = rng(12);
    for case in 0..1000 {
        let order = if case % 2 == 0 { SugenoOrder::First } else { SugenoOrder::Zero };
        let n = 1 + case % 3;
        let fam = MfFamily::ALL[case % 8];
        let model = random_model(&mut r, n, 2 + case % 2, fam, order);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-0.2..1.2)).collect();
        let row = model.design_row(&x).unwrap();
        let dot: f64 = row.iter().zip(model.linear_params()).map(|(a, b)| a * b).sum();
        let y = model.predict(&x).unwrap();
        assert!((dot - y).abs() <= 1e-12 * y.abs().max(1.0), "case {case}: {dot} vs {y}");
    }
}

#[test]
fn zero_order_equals_first_order_with_zero_slopes() {
    let mut r = rng(13);
    let zero = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::Zero);
    let mut first = AnfisModel::new(zero.inputs().to_vec(), SugenoOrder::First).unwrap();
    first.set_consequents(zero.consequents().to_vec()).unwrap();
    for _ in 0..200 {
        let x = [r.random_range(0.0..1.0), r.random_range(0.0..1.0)];
        assert_eq!(zero.predict(&x).unwrap(), first.predict(&x).unwrap());
    }
    assert_eq!(zero.linear_param_count(), 9);
    assert_eq!(first.linear_param_count(), 27);
}

#[test]
fn swapping_inputs_with_matching_rules_preserves_output() {
    let mut r = rng(14);
    let model = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::First);
    let swapped_inputs: Vec<FuzzyVariable> = model.inputs().iter().rev().cloned().collect();
    let mut swapped = AnfisModel::new(swapped_inputs, SugenoOrder::First).unwrap();
    let mut cons = vec![0.0; model.consequents().len()];
    for a in 0..3 {
        for b in 0..3 {
            let p = model.consequent_row(a * 3 + b);
            cons[(b * 3 + a) * 3..(b * 3 + a) * 3 + 3].copy_from_slice(&[p[1], p[0], p[2]]);
        }
    }
    swapped.set_consequents(cons).unwrap();
    for _ in 0..200 {
        let (u, v) = (r.random_range(0.0..1.0), r.random_range(0.0..1.0));
        let a = model.predict(&[u, v]).unwrap();
        let b = swapped.predict(&[v, u]).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn serialization_round_trip_is_bitwise() {
    let mut r = rng(15);
    let dir = tempfile::tempdir().unwrap();
    for fam in MfFamily::ALL {
        for order in [SugenoOrder::Zero, SugenoOrder::First] {
            let model = random_model(&mut r, 3, 2, fam, order);
            let path = dir.path().join(format!("{fam}-{order}.json"));
            model.save(&path).unwrap();
            let back = AnfisModel::load(&path).unwrap();
            assert_eq!(back, model);
            let xs: Vec<f64> = (0..300).map(|_| r.random_range(-0.5..1.5)).collect();
            let a = model.predict_batch(&xs).unwrap();
            let b = back.predict_batch(&xs).unwrap();
            assert!(a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits()));
        }
    }
}

#[test]
fn batch_prediction_matches_row_prediction() {
    let mut r = rng(16);
    let model = random_model(&mut r, 3, 3, MfFamily::Gaussian, SugenoOrder::First);
    let xs: Vec<f64> = (0..3 * 500).map(|_| r.random_range(0.0..1.0)).collect();
    let batch = model.predict_batch(&xs).unwrap();
    for (row, y) in xs.chunks(3).zip(&batch) {
        assert_eq!(model.predict(row).unwrap().to_bits(), y.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalized_strengths_sum_to_one(seed in any::<u64>(), fam_idx in 0usize..8, n in 1usize..4, x in prop::collection::vec(-0.5f64..1.5, 3)) {
        let mut r = rng(seed);
        let model = random_model(&mut r, n, 3, MfFamily::ALL[fam_idx], SugenoOrder::First);
        let rec = model.forward(&x[..n]).unwrap();
        let total: f64 = rec.normalized.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12, "sum {total}");
        prop_assert!(rec.normalized.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn output_is_a_convex_combination_of_rule_outputs(seed in any::<u64>(), x in prop::collection::vec(0.0f64..1.0, 2)) {
        let mut r = rng(seed);
        let model = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::First);
        let rec = model.forward(&x).unwrap();
        let lo = rec.rule_outputs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rec.rule_outputs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(rec.output >= lo - 1e-12 && rec.output <= hi + 1e-12);
    }

    #[test]
    fn normalize_handles_any_nonnegative_vector(w in prop::collection::vec(0.0f64..1.0, 1..30)) {
        let out = normalize(&w);
        let total: f64 = out.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}
