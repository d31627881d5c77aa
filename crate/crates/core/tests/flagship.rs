mod support;

use std::sync::OnceLock;

use sinc_radial::coulomb::{eigen_table, norm_on_grid, solve_states, LevelSet, Settings};
use sinc_radial::exec::Execution;
use support::{log_samples, sign_changes, slope};

fn tables() -> &'static (Vec<LevelSet>, Vec<LevelSet>) {
    static T: OnceLock<(Vec<LevelSet>, Vec<LevelSet>)> = OnceLock::new();
    T.get_or_init(|| {
        let ls = [0, 1, 2, 3, 4];
        let fine = eigen_table(&ls, 5, &Settings::default()).unwrap();
        let coarse = eigen_table(&ls, 5, &Settings::default().with_m(400)).unwrap();
        (fine, coarse)
    })
}

#[test]
fn refinement_from_400_to_500_is_below_1e6() {
    let (fine, coarse) = tables();
    for (f, c) in fine.iter().zip(coarse) {
        for (a, b) in f.states.iter().zip(&c.states) {
            assert!((a.lambda - b.lambda).abs() <= 1e-6, "l={} n={}: {} vs {}", f.l, a.n, a.lambda, b.lambda);
        }
    }
}

#[test]
fn spectrum_increases_in_n_and_l() {
    let (fine, _) = tables();
    for set in fine {
        assert!(set.states.windows(2).all(|w| w[0].lambda < w[1].lambda), "l={}", set.l);
    }
    for n in 0..5 {
        assert!(fine.windows(2).all(|w| w[0].states[n].lambda < w[1].states[n].lambda), "n={n}");
    }
}

#[test]
fn ground_state_l0_is_positive() {
    let s = &tables().0[0].states[0];
    assert!(log_samples(0.05, 10.0, 1000).iter().all(|&x| s.evaluate_r(x).unwrap() > 0.0));
}

#[test]
fn second_excited_l0_has_two_nodes() {
    let s = &tables().0[0].states[2];
    let r: Vec<f64> = log_samples(0.05, 10.0, 1000).iter().map(|&x| s.evaluate_r(x).unwrap()).collect();
    assert_eq!(sign_changes(&r), 2);
}

#[test]
fn l4_ground_state_is_suppressed_near_origin() {
    let s = &tables().0[4].states[0];
    let peak = log_samples(0.05, 30.0, 2000)
        .iter()
        .map(|&x| s.evaluate_r(x).unwrap().abs())
        .fold(0.0, f64::max);
    assert!(s.evaluate_r(0.1).unwrap().abs() <= 1e-3 * peak);
}

#[test]
fn near_origin_power_law_matches_l() {
    let (fine, _) = tables();
    let xs = log_samples(1e-3, 1e-2, 20);
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    for set in fine {
        for s in &set.states {
            let lr: Vec<f64> = xs.iter().map(|&x| s.evaluate_r(x).unwrap().abs().ln()).collect();
            let k = slope(&lx, &lr);
            let l = f64::from(set.l);
            assert!((k - l).abs() <= 0.05 * l.max(1.0), "l={} n={}: slope {k}", set.l, s.n);
        }
    }
}

#[test]
fn constant_shift_between_lambda_and_lambda_prime() {
    for set in &tables().0 {
        for s in &set.states {
            assert!((s.lambda_prime - s.lambda - 1.2703628454614782).abs() <= 1e-12);
        }
    }
}

#[test]
fn normalization_survives_independent_regrid() {
    let s = &solve_states(0, 1, &Settings::default()).unwrap()[0];
    let norm = norm_on_grid(s, 700, Execution::Sequential).unwrap();
    assert!((norm - 1.0).abs() <= 1e-8, "{norm}");
}
