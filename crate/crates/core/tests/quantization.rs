mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use uncertain_extent::quantization::{
    build_kvariate, build_univariate, eval_kvariate, reduce_kvariate, reduce_univariate, trial_count,
};
use uncertain_extent::{KVariateQuantization, Point, QuantizationParams, Statistic, UncertainPointSet};

#[test]
fn small_discrete_model_within_epsilon() {
    let mut r = rng(21);
    let model = random_discrete_model(&mut r, 2, 2, 2);
    let eps = 0.1;
    let q = build_univariate(&model, &Statistic::Seb2Radius, &QuantizationParams::new(eps, 0.05).unwrap(), 4).unwrap();
    let exact = exact_atoms(&model, seb_radius_2d);
    assert!(sup_deviation(&uniform_atoms(q.values()), &exact, 1e-9) <= eps);
}

#[test]
fn trial_count_formula() {
    let p = QuantizationParams::new(0.2, 0.05).unwrap();
    let want = (0.5 / 0.04 * (1.0f64 / (0.2 * 0.05)).ln()).ceil() as usize;
    assert_eq!(p.univariate_trials(), want);
    assert_eq!(trial_count(0.5, 0.2, 0.05), want);
}

#[test]
fn point_mass_model_is_a_unit_step() {
    let pts = vec![Point::from([0.0, 0.0]), Point::from([3.0, 4.0]), Point::from([1.0, 1.0])];
    let model = UncertainPointSet::point_masses(&pts).unwrap();
    let q = build_univariate(&model, &Statistic::Diameter, &QuantizationParams::new(0.2, 0.05).unwrap(), 1).unwrap();
    assert!(q.values().iter().all(|&v| v == 5.0));
    assert_eq!(q.eval(4.999), 0.0);
    assert_eq!(q.eval(5.0), 1.0);
    let k = build_kvariate(&model, &Statistic::AabbWidths, &QuantizationParams::new(0.3, 0.05).unwrap(), 1).unwrap();
    assert!(k.points().iter().all(|p| p == &vec![3.0, 4.0]));
    assert_eq!(k.eval(&[3.0, 3.9]).unwrap(), 0.0);
    assert_eq!(k.eval(&[3.0, 4.0]).unwrap(), 1.0);
}

#[test]
fn reduction_ranks() {
    let v: Vec<f64> = (1..=100).map(f64::from).collect();
    let r = reduce_univariate(&v, 0.2).unwrap();
    let want: Vec<f64> = (0..10).map(|i| 5.0 + 10.0 * i as f64).collect();
    assert_eq!(r.values(), want.as_slice());
    let small = [3.0, 1.0, 4.0, 1.0];
    assert_eq!(reduce_univariate(&small, 0.5).unwrap().values(), &[1.0, 1.0, 3.0, 4.0]);
}

#[test]
fn reduction_of_ten_thousand_values() {
    let mut r = rng(22);
    let v: Vec<f64> = (0..10_000).map(|_| r.gen::<f64>().powi(3)).collect();
    let red = reduce_univariate(&v, 0.1).unwrap();
    assert!(sup_deviation(&uniform_atoms(red.values()), &uniform_atoms(&v), 0.0) <= 0.05);
}

#[test]
fn kvariate_small_model_on_grid() {
    let mut r = rng(23);
    let model = random_discrete_model(&mut r, 2, 3, 2);
    let eps = 0.2;
    let q = build_kvariate(&model, &Statistic::AabbWidths, &QuantizationParams::new(eps, 0.05).unwrap(), 8).unwrap();
    let exact: Vec<(Vec<f64>, f64)> = outcomes(&model).into_iter().map(|(p, w)| (box_widths(&p), w)).collect();
    let hi: Vec<f64> = (0..2).map(|a| exact.iter().map(|(v, _)| v[a]).fold(0.0, f64::max)).collect();
    for i in 0..50 {
        for j in 0..50 {
            let v = [hi[0] * 1.05 * i as f64 / 49.0, hi[1] * 1.05 * j as f64 / 49.0];
            let want: f64 = exact.iter().filter(|(w, _)| w[0] <= v[0] && w[1] <= v[1]).map(|(_, m)| m).sum();
            assert!((eval_kvariate(&q, &v).unwrap() - want).abs() <= eps);
        }
    }
}

#[test]
fn kvariate_reduction_of_uniform_points() {
    let mut r = rng(24);
    let pts: Vec<Vec<f64>> = (0..10_000).map(|_| vec![r.gen(), r.gen()]).collect();
    let red = reduce_kvariate(&pts, 0.2, 2.0, 3).unwrap();
    assert!(red.len() < pts.len());
    let full = KVariateQuantization::new(2, pts).unwrap();
    for i in 0..=20 {
        for j in 0..=20 {
            let v = [i as f64 / 20.0, j as f64 / 20.0];
            assert!((red.eval(&v).unwrap() - full.eval(&v).unwrap()).abs() <= 0.1);
        }
    }
}

#[test]
fn dominance_examples() {
    let q = KVariateQuantization::new(2, vec![vec![1.0, 1.0], vec![2.0, 3.0], vec![3.0, 2.0]]).unwrap();
    assert!((q.eval(&[2.5, 2.5]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(q.eval(&[0.0, 10.0]).unwrap(), 0.0);
    assert_eq!(q.eval(&[3.0, 3.0]).unwrap(), 1.0);
    let same = KVariateQuantization::new(2, vec![vec![1.0, 2.0]; 50]).unwrap();
    let red = reduce_kvariate(same.points(), 0.3, 2.0, 1).unwrap();
    assert_eq!(red.eval(&[1.0, 2.0]).unwrap(), 1.0);
    assert_eq!(red.eval(&[1.0, 1.9]).unwrap(), 0.0);
}

#[test]
fn seeded_builds_are_identical() {
    let mut r = rng(25);
    let model = random_discrete_model(&mut r, 5, 3, 2);
    let p = QuantizationParams::new(0.2, 0.05).unwrap();
    let a = build_univariate(&model, &Statistic::AabbPerimeter, &p, 99).unwrap();
    let b = build_univariate(&model, &Statistic::AabbPerimeter, &p, 99).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn reduction_is_within_half_epsilon(
        v in prop::collection::vec(-1e3f64..1e3, 1..600),
        eps in 0.02f64..0.9,
    ) {
        let red = reduce_univariate(&v, eps).unwrap();
        prop_assert!(red.len() <= (2.0 / eps).ceil() as usize);
        prop_assert!(sup_deviation(&uniform_atoms(red.values()), &uniform_atoms(&v), 0.0) <= eps / 2.0 + 1e-12);
    }

    #[test]
    fn univariate_cdf_is_monotone(
        v in prop::collection::vec(-10.0f64..10.0, 1..50),
        mut ts in prop::collection::vec(-12.0f64..12.0, 2..20),
    ) {
        let q = uncertain_extent::UnivariateQuantization::new(v).unwrap();
        ts.sort_by(f64::total_cmp);
        let vals: Vec<f64> = ts.iter().map(|&t| q.eval(t)).collect();
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(vals.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn dominance_is_monotone(
        pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2), 1..40),
        a in prop::collection::vec(0.0f64..1.0, 2),
        b in prop::collection::vec(0.0f64..0.5, 2),
    ) {
        let q = KVariateQuantization::new(2, pts).unwrap();
        let hi = [a[0] + b[0], a[1] + b[1]];
        prop_assert!(q.eval(&a).unwrap() <= q.eval(&hi).unwrap());
    }
}
