mod common;

use anfis::data::Dataset;
use anfis::lse::lse_solve;
use anfis::metrics::{rmse, RmseForm};
use anfis::mf::MfFamily;
use anfis::model::{AnfisModel, SugenoOrder};
use anfis::train::{
    design_matrix, fit, gd_step, lse_step, premise_gradient, train_epoch, CheckPolicy, EtaPolicy, StopReason,
    TrainConfig,
};
use common::{random_dataset, random_model, rng, with_premises};
use rand::Rng;

/// Neumaier-compensated sum.
fn exact_sum(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for t in terms {
        let u = s + t;
        c += if s.abs() >= t.abs() { (s - u) + t } else { (t - u) + s };
        s = u;
    }
    s + c
}

/// Normal equations with compensated accumulation, partial-pivot
/// elimination and two rounds of iterative refinement.
fn normal_equations(a: &[f64], rows: usize, cols: usize, y: &[f64]) -> Vec<f64> {
    let gram: Vec<f64> = (0..cols * cols)
        .map(|ij| exact_sum((0..rows).map(|k| a[k * cols + ij / cols] * a[k * cols + ij % cols])))
        .collect();
    let solve = |rhs: Vec<f64>| -> Vec<f64> {
        let mut m = gram.clone();
        let mut b = rhs;
        for col in 0..cols {
            let piv = (col..cols)
                .max_by(|&i, &j| m[i * cols + col].abs().total_cmp(&m[j * cols + col].abs()))
                .unwrap();
            for c in 0..cols {
                m.swap(col * cols + c, piv * cols + c);
            }
            b.swap(col, piv);
            for r in col + 1..cols {
                let f = m[r * cols + col] / m[col * cols + col];
                for c in col..cols {
                    m[r * cols + c] -= f * m[col * cols + c];
                }
                b[r] -= f * b[col];
            }
        }
        let mut x = vec![0.0; cols];
        for r in (0..cols).rev() {
            let s = exact_sum((r + 1..cols).map(|c| m[r * cols + c] * x[c]));
            x[r] = (b[r] - s) / m[r * cols + r];
        }
        x
    };
    let rhs = |x: &[f64]| -> Vec<f64> {
        let resid: Vec<f64> = (0..rows)
            .map(|k| exact_sum((0..cols).map(|c| -a[k * cols + c] * x[c]).chain([y[k]])))
            .collect();
        (0..cols).map(|c| exact_sum((0..rows).map(|k| a[k * cols + c] * resid[k]))).collect()
    };
    let mut x = solve(rhs(&vec![0.0; cols]));
    for _ in 0..2 {
        let dx = solve(rhs(&x));
        x.iter_mut().zip(dx).for_each(|(xi, d)| *xi += d);
    }
    x
}

fn sse(a: &[f64], rows: usize, cols: usize, y: &[f64], theta: &[f64]) -> f64 {
    (0..rows)
        .map(|k| {
            let f: f64 = (0..cols).map(|c| a[k * cols + c] * theta[c]).sum();
            (y[k] - f).powi(2)
        })
        .sum()
}

#[test]
fn lse_matches_normal_equation_oracle() {
    let mut r = rng(21);
    for _ in 0..10 {
        let (rows, cols) = (50, 10);
        let a: Vec<f64> = (0..rows * cols).map(|_| r.random_range(-1.0..1.0)).collect();
        let y: Vec<f64> = (0..rows).map(|_| r.random_range(-3.0..3.0)).collect();
        let ours = lse_solve(&a, rows, cols, &y).unwrap();
        let oracle = normal_equations(&a, rows, cols, &y);
        for (p, q) in ours.iter().zip(&oracle) {
            assert!((p - q).abs() < 1e-8, "{p} vs {q}");
        }
    }
}

#[test]
fn lse_is_optimal_under_random_perturbations() {
    let mut r = rng(22);
    let model = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::First);
    let data = random_dataset(&mut r, 2, 80, |x| (3.0 * x[0]).sin() + x[1] * x[1]);
    let a = design_matrix(&model, &data).unwrap();
    let m = model.linear_param_count();
    let theta = lse_solve(&a, data.len(), m, data.targets()).unwrap();
    let best = sse(&a, data.len(), m, data.targets(), &theta);
    for _ in 0..100 {
        let d: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..1.0)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let moved: Vec<f64> = theta.iter().zip(&d).map(|(t, v)| t + 1e-3 * v / norm).collect();
        assert!(sse(&a, data.len(), m, data.targets(), &moved) >= best - 1e-12);
    }
}

fn cost(model: &AnfisModel, data: &Dataset) -> f64 {
    let pred = model.predict_batch(data.inputs()).unwrap();
    rmse(data.targets(), &pred, RmseForm::Cost).unwrap()
}

#[test]
fn premise_gradient_matches_central_differences() {
    let mut r = rng(23);
    let families = [MfFamily::Gaussian, MfFamily::GeneralizedBell, MfFamily::SigmoidProduct, MfFamily::TwoSidedGaussian];
    for case in 0..20 {
        let fam = families[case % families.len()];
        let model = random_model(&mut r, 2, 2, fam, SugenoOrder::First);
        let data = random_dataset(&mut r, 2, 50, |x| x[0] * x[1] + 0.3 * x[0]);
        let grad = premise_gradient(&model, &data).unwrap();
        let theta = model.premise_params();
        for q in 0..theta.len() {
            let h = 1e-6 * theta[q].abs().max(1.0);
            let mut up = theta.clone();
            up[q] += h;
            let mut down = theta.clone();
            down[q] -= h;
            let fd = (cost(&with_premises(&model, &up), &data) - cost(&with_premises(&model, &down), &data)) / (2.0 * h);
            let tol = 1e-4 * fd.abs().max(grad[q].abs()) + 1e-9;
            assert!((grad[q] - fd).abs() <= tol, "case {case} ({fam}) param {q}: {} vs {fd}", grad[q]);
        }
    }
}

#[test]
fn duplicating_every_sample_leaves_the_gradient_unchanged() {
    let mut r = rng(24);
    let model = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::First);
    let data = random_dataset(&mut r, 2, 40, |x| x[0] - x[1]);
    let doubled = data.concat(&data).unwrap();
    let g1 = premise_gradient(&model, &data).unwrap();
    let g2 = premise_gradient(&model, &doubled).unwrap();
    for (a, b) in g1.iter().zip(&g2) {
        assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn exact_fit_has_zero_gradient() {
    let mut r = rng(25);
    let mut model = random_model(&mut r, 2, 2, MfFamily::Gaussian, SugenoOrder::First);
    let probe = random_dataset(&mut r, 2, 60, |_| 0.0);
    let truth = model.predict_batch(probe.inputs()).unwrap();
    let data = Dataset::new(probe.input_names().to_vec(), "y", probe.inputs().to_vec(), truth).unwrap();
    lse_step(&mut model, &data).unwrap();
    assert!(premise_gradient(&model, &data).unwrap().iter().all(|&g| g == 0.0));
}

#[test]
fn gd_step_moves_clamps_and_checks_length() {
    let mut r = rng(26);
    let model = random_model(&mut r, 2, 2, MfFamily::Gaussian, SugenoOrder::First);
    let n = model.premise_param_count();

    let mut same = model.clone();
    gd_step(&mut same, &vec![1.0; n], 0.0, 1e-4).unwrap();
    assert_eq!(same, model);

    let mut moved = model.clone();
    gd_step(&mut moved, &vec![0.01; n], 1.0, 1e-4).unwrap();
    for (a, b) in moved.premise_params().iter().zip(model.premise_params()) {
        assert!((a - (b - 0.01)).abs() < 1e-15);
    }

    let mut crushed = model.clone();
    let mut push = vec![0.0; n];
    push[1] = 1e6;
    gd_step(&mut crushed, &push, 1.0, 1e-4).unwrap();
    assert_eq!(crushed.premise_params()[1], 1e-4, "width floored at 1e-4 x range");

    assert!(gd_step(&mut moved, &vec![0.0; n + 1], 0.1, 1e-4).is_err());
}

#[test]
fn epoch_with_zero_rate_is_idempotent() {
    let mut r = rng(27);
    let mut model = random_model(&mut r, 2, 3, MfFamily::Gaussian, SugenoOrder::First);
    let data = random_dataset(&mut r, 2, 60, |x| (x[0] + x[1]).cos());
    let a = train_epoch(&mut model, &data, 0.0, 1e-4).unwrap();
    let snapshot = model.clone();
    let b = train_epoch(&mut model, &data, 0.0, 1e-4).unwrap();
    assert_eq!(a, b);
    assert_eq!(model, snapshot);
}

#[test]
fn linear_target_is_fit_exactly() {
    let xs: Vec<f64> = (0..21).map(|k| k as f64 / 20.0).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
    let data = Dataset::new(vec!["x".into()], "y", xs, ys).unwrap();
    let mut model = AnfisModel::grid(&data.input_ranges().unwrap(), 2, MfFamily::Gaussian, SugenoOrder::First).unwrap();
    let errs = train_epoch(&mut model, &data, 0.01, 1e-4).unwrap();
    assert!(errs.rmse_std < 1e-8, "{}", errs.rmse_std);
}

fn noisy(seed: u64, rows: usize) -> Dataset {
    let mut r = rng(seed);
    random_dataset(&mut r, 2, rows, |x| (4.0 * x[0]).sin() * (3.0 * x[1]).cos())
        .rows()
        .map(|(x, y)| (x.to_vec(), y))
        .fold(None::<(Vec<f64>, Vec<f64>)>, |acc, (x, y)| {
            let (mut i, mut t) = acc.unwrap_or_default();
            i.extend(x);
            t.push(y);
            Some((i, t))
        })
        .map(|(i, t)| {
            let mut r = rng(seed ^ 0xabc);
            let t = t.into_iter().map(|v| v + r.random_range(-0.2..0.2)).collect();
            Dataset::new(vec!["in0".into(), "in1".into()], "y", i, t).unwrap()
        })
        .unwrap()
}

fn small_model(data: &Dataset, mfs: usize) -> AnfisModel {
    AnfisModel::grid(&data.input_ranges().unwrap(), mfs, MfFamily::Gaussian, SugenoOrder::First).unwrap()
}

#[test]
fn fit_runs_the_budget_when_goal_is_zero() {
    let data = noisy(31, 60);
    let cfg = TrainConfig { max_epochs: 25, error_goal: 0.0, checking: None, eta0: 0.01, ..TrainConfig::default() };
    let (_, trace) = fit(small_model(&data, 2), &data, &data, &cfg).unwrap();
    assert_eq!(trace.stopped_reason, StopReason::MaxEpochs);
    assert_eq!(trace.epochs_run(), 25);
    assert!(trace.records.iter().all(|r| r.check_rmse_cost.is_none()));
}

#[test]
fn fit_stops_at_the_error_goal() {
    let xs: Vec<f64> = (0..30).map(|k| k as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 1.0 - 0.5 * x).collect();
    let data = Dataset::new(vec!["x".into()], "y", xs, ys).unwrap();
    let (_, trace) = fit(small_model(&data, 2), &data, &data, &TrainConfig::default()).unwrap();
    assert_eq!(trace.stopped_reason, StopReason::ErrorGoal);
    assert_eq!(trace.epochs_run(), 1);
}

#[test]
fn fit_with_zero_rate_keeps_premises() {
    let data = noisy(32, 50);
    let model = small_model(&data, 3);
    let cfg = TrainConfig { eta0: 0.0, max_epochs: 10, error_goal: 0.0, checking: None, ..TrainConfig::default() };
    let (best, trace) = fit(model.clone(), &data, &data, &cfg).unwrap();
    assert_eq!(best.premise_params(), model.premise_params());
    let first = trace.records[0].train_rmse_std;
    assert!(trace.records.iter().all(|r| r.train_rmse_std == first));
}

#[test]
fn fit_is_deterministic() {
    let data = noisy(33, 60);
    let check = noisy(34, 40);
    let cfg = TrainConfig {
        eta0: 0.05,
        eta_policy: EtaPolicy::ADAPTIVE_DEFAULT,
        max_epochs: 40,
        checking: Some(CheckPolicy { every: 3, patience: None }),
        ..TrainConfig::default()
    };
    let (m1, t1) = fit(small_model(&data, 3), &data, &check, &cfg).unwrap();
    let (m2, t2) = fit(small_model(&data, 3), &data, &check, &cfg).unwrap();
    assert_eq!(m1, m2);
    let strip = |t: &anfis::train::TrainTrace| {
        t.records.iter().map(|r| (r.epoch, r.train_rmse_cost.to_bits(), r.check_rmse_cost.map(f64::to_bits), r.eta.to_bits())).collect::<Vec<_>>()
    };
    assert_eq!(strip(&t1), strip(&t2));
    assert_eq!(t1.best_epoch, t2.best_epoch);
}

#[test]
fn fit_stops_early_and_returns_the_best_checked_snapshot() {
    let train = noisy(35, 40);
    let check = noisy(36, 200);
    let cfg = TrainConfig {
        eta0: 0.2,
        max_epochs: 2000,
        error_goal: 0.0,
        checking: Some(CheckPolicy { every: 1, patience: Some(3) }),
        ..TrainConfig::default()
    };
    let (best, trace) = fit(small_model(&train, 3), &train, &check, &cfg).unwrap();
    assert_eq!(trace.stopped_reason, StopReason::EarlyStop, "{:?}", trace.check_points().iter().step_by(50).collect::<Vec<_>>());
    let (epoch, check_cost) = trace.check_argmin().unwrap();
    assert_eq!(trace.best_epoch, epoch);
    assert!(epoch < trace.epochs_run());
    assert_eq!(cost(&best, &check).to_bits(), check_cost.to_bits());
}

#[test]
fn widths_never_fall_below_the_floor() {
    let train = noisy(37, 40);
    let start = small_model(&train, 3);
    let mut model = start.clone();
    for _ in 0..200 {
        train_epoch(&mut model, &train, 5.0, 1e-4).unwrap();
        for v in model.inputs() {
            let floor = v.sigma_min(1e-4);
            assert!(v.mfs.iter().all(|mf| mf.params()[1] >= floor));
        }
    }
    assert_ne!(model.premise_params(), start.premise_params());
}
