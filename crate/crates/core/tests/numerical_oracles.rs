mod common;

use common::*;
use forge_core::baselines::Criterion;
use forge_core::baselines::{
    topsis_closeness, ArmModel, LinUcb, SlidingWindowUcb, ThompsonSampling, TOPSIS_CRITERIA,
};
use forge_core::env::ContextVector;
use forge_core::hybrid::GramState;
use forge_core::neural::TwoTowerNet;
use forge_core::rng::{stream, Stream};
use rand::Rng;

#[test]
fn sherman_morrison_matches_direct_inverse_after_500_updates() {
    let mut r = rng(1);
    let mut gram = GramState::new(64, 1.0, 100);
    let mut a = scaled_identity(64, 1.0);
    for _ in 0..500 {
        let phi = uniform_vec(&mut r, 64, -1.0, 1.0);
        gram.posterior_update(&phi);
        add_outer(&mut a, &phi);
    }
    let err = frobenius(&invert(&a), gram.a_inv().as_slice());
    assert!(err < 1e-6, "frobenius error {err}");
}

#[test]
fn sherman_morrison_matches_direct_inverse_every_step() {
    let mut r = rng(2);
    // A random SPD start, then rank-one steps without any re-inversion.
    let mut a = scaled_identity(64, 1.0);
    for _ in 0..80 {
        add_outer(&mut a, &uniform_vec(&mut r, 64, -0.3, 0.3));
    }
    let flat: Vec<f64> = invert(&a).into_iter().flatten().collect();
    let start = forge_core::linalg::Matrix::from_vec(64, 64, flat).unwrap();
    let mut gram = GramState::from_inverse(start, usize::MAX).unwrap();
    for step in 0..100 {
        let phi = uniform_vec(&mut r, 64, -1.0, 1.0);
        gram.posterior_update(&phi);
        add_outer(&mut a, &phi);
        let err = frobenius(&invert(&a), gram.a_inv().as_slice());
        assert!(err < 1e-8, "step {step}: frobenius error {err}");
    }
}

#[test]
fn gradients_match_finite_differences_on_random_instances() {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for instance in 0..100 {
        let qd = r.random_range(2..6);
        let fd = r.random_range(2..5);
        let mut init = stream(instance, Stream::Init);
        let mut net = TwoTowerNet::random(qd, fd, &mut init);
        // Larger weights than the default init so tanh curvature matters.
        for p in net.params_mut() {
            *p *= 3.0;
        }
        let len = ContextVector::len_for(qd);
        let batch: Vec<(Vec<f64>, f64)> = (0..3)
            .map(|_| {
                (
                    uniform_vec(&mut r, len, -1.0, 1.0),
                    r.random_range(0.0..1.0),
                )
            })
            .collect();
        let view = || batch.iter().map(|(x, y)| (x.as_slice(), *y));
        let (_, grad) = net.loss_and_gradients(view()).unwrap();
        let eps = 1e-5;
        for i in 0..grad.len() {
            let orig = net.params()[i];
            net.params_mut()[i] = orig + eps;
            let up = net.loss(view()).unwrap();
            net.params_mut()[i] = orig - eps;
            let down = net.loss(view()).unwrap();
            net.params_mut()[i] = orig;
            let numeric = (up - down) / (2.0 * eps);
            let rel = (numeric - grad[i]).abs() / numeric.abs().max(grad[i].abs()).max(1e-3);
            worst = worst.max(rel);
        }
    }
    assert!(worst < 1e-4, "worst relative error {worst}");
}

#[test]
fn topsis_matches_brute_force_on_random_matrices() {
    let mut r = rng(4);
    let benefit: Vec<bool> = TOPSIS_CRITERIA
        .iter()
        .map(|c| *c == Criterion::Benefit)
        .collect();
    for _ in 0..20 {
        let rows = r.random_range(2..25);
        let m: Vec<Vec<f64>> = (0..rows)
            .map(|_| uniform_vec(&mut r, 4, 0.01, 50.0))
            .collect();
        let mut w = uniform_vec(&mut r, 4, 0.1, 1.0);
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let got = topsis_closeness(&m, &w, &TOPSIS_CRITERIA).unwrap();
        let want = brute_topsis(&m, &w, &benefit);
        for (g, e) in got.iter().zip(&want) {
            assert!((g - e).abs() < 1e-9, "{g} vs {e}");
        }
    }
}

#[test]
fn topsis_hand_example() {
    let m = vec![
        vec![0.9, 0.8, 20.0, 50.0],
        vec![0.5, 0.5, 20.0, 50.0],
        vec![0.7, 0.9, 40.0, 50.0],
    ];
    let w = [0.25; 4];
    let got = topsis_closeness(&m, &w, &TOPSIS_CRITERIA).unwrap();
    let want = brute_topsis(&m, &w, &[true, true, false, false]);
    for (g, e) in got.iter().zip(&want) {
        assert!((g - e).abs() < 1e-9);
    }
    // Independently evaluated with numpy.
    let spreadsheet = [0.8810687606662283, 0.47889382218769855, 0.44113703556933476];
    for (g, e) in got.iter().zip(&spreadsheet) {
        assert!((g - e).abs() < 1e-9);
    }
}

#[test]
fn linucb_arm_matches_closed_form_ridge() {
    let mut r = rng(5);
    let d = 24;
    let mut arm = ArmModel::new(d, 1.0);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for _ in 0..60 {
        let x = uniform_vec(&mut r, d, -1.0, 1.0);
        let y = f64::from(u8::from(r.random_bool(0.4)));
        arm.update(&x, y);
        xs.push(x);
        ys.push(y);
    }
    let want = ridge(&xs, &ys, 1.0);
    for (g, e) in arm.theta().iter().zip(&want) {
        assert!((g - e).abs() < 1e-6);
    }
}

#[test]
fn linucb_inverse_after_500_updates_matches_direct() {
    let mut r = rng(6);
    let d = 40;
    let mut arm = ArmModel::new(d, 1.0);
    let mut a = scaled_identity(d, 1.0);
    for _ in 0..500 {
        let x = uniform_vec(&mut r, d, -1.0, 1.0);
        arm.update(&x, 1.0);
        add_outer(&mut a, &x);
    }
    let err = frobenius(&invert(&a), arm.a_inv().as_slice());
    assert!(err < 1e-6, "frobenius error {err}");
}

#[test]
fn linucb_score_is_mean_plus_alpha_width() {
    let mut r = rng(7);
    let d = 10;
    let mut lin = LinUcb::new(3, 1.5, 1.0);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for _ in 0..15 {
        let x = uniform_vec(&mut r, d, -1.0, 1.0);
        let y = r.random_range(0.0..1.0);
        lin.update_arm(1, &x, y);
        xs.push(x);
        ys.push(y);
    }
    let mut a = scaled_identity(d, 1.0);
    xs.iter().for_each(|x| add_outer(&mut a, x));
    let a_inv = invert(&a);
    let theta = ridge(&xs, &ys, 1.0);
    let probe = uniform_vec(&mut r, d, -1.0, 1.0);
    let mean: f64 = probe.iter().zip(&theta).map(|(p, t)| p * t).sum();
    let var: f64 = probe
        .iter()
        .zip(mat_vec(&a_inv, &probe))
        .map(|(p, q)| p * q)
        .sum();
    assert!((lin.score(1, &probe) - (mean + 1.5 * var.sqrt())).abs() < 1e-6);
}

#[test]
fn thompson_posterior_mean_matches_ridge() {
    let mut r = rng(8);
    let d = 30;
    let mut ts = ThompsonSampling::new(d, 1.0, 0.25, stream(0, Stream::Policy));
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for _ in 0..80 {
        let x = uniform_vec(&mut r, d, -1.0, 1.0);
        let y = f64::from(u8::from(r.random_bool(0.6)));
        ts.observe(&x, y);
        xs.push(x);
        ys.push(y);
    }
    let want = ridge(&xs, &ys, 1.0);
    for (g, e) in ts.posterior_mean().iter().zip(&want) {
        assert!((g - e).abs() < 1e-8);
    }
}

#[test]
fn sliding_window_equals_fresh_replay_of_recent_steps() {
    let mut r = rng(9);
    let (k, d) = (4, 8);
    let history: Vec<(usize, Vec<f64>, f64)> = (0..60)
        .map(|_| {
            (
                r.random_range(0..k),
                uniform_vec(&mut r, d, -1.0, 1.0),
                r.random_range(0.0..1.0),
            )
        })
        .collect();
    let mut windowed = SlidingWindowUcb::new(k, 1.0, 1.0, Some(50));
    for (arm, x, y) in &history {
        windowed.update_arm(*arm, x, *y);
    }
    let mut fresh = SlidingWindowUcb::new(k, 1.0, 1.0, Some(50));
    for (arm, x, y) in &history[10..] {
        fresh.update_arm(*arm, x, *y);
    }
    assert_eq!(windowed.window_len(), 50);
    for _ in 0..20 {
        let probe = uniform_vec(&mut r, d, -1.0, 1.0);
        for arm in 0..k {
            let (a, b) = (windowed.score(arm, &probe), fresh.score(arm, &probe));
            assert!((a - b).abs() < 1e-9, "arm {arm}: {a} vs {b}");
        }
    }
}

#[test]
fn unbounded_window_equals_linucb() {
    let mut r = rng(10);
    let (k, d) = (5, 6);
    let mut sw = SlidingWindowUcb::new(k, 1.0, 1.0, None);
    let mut lin = LinUcb::new(k, 1.0, 1.0);
    for _ in 0..120 {
        let contexts: Vec<Vec<f64>> = (0..k).map(|_| uniform_vec(&mut r, d, -1.0, 1.0)).collect();
        let pick = lin.select_from(&contexts);
        assert_eq!(sw.select_from(&contexts), pick);
        let y = r.random_range(0.0..1.0);
        lin.update_arm(pick, &contexts[pick], y);
        sw.update_arm(pick, &contexts[pick], y);
    }
}
