mod common;

use common::{families, families_at, rel};
use pks_core::bounds::*;
use pks_core::datum::{CartesianGrid, InitialDatum};
use pks_core::geometry::Point;
use pks_core::heatmass::{EvalMode, HeatMassCurve};
use pks_core::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

#[test]
fn heat_mass_is_increasing_with_range_in_zero_mass() {
    for d in families(16.0 * PI) {
        for mode in [EvalMode::Quadrature, EvalMode::LaplaceRadial] {
            let c = HeatMassCurve::with_mode(&d, d.center(), mode).unwrap();
            let vals: Vec<f64> = log_spaced(1e-2, 1e4, 50).into_iter().map(|s| c.eval(s).unwrap()).collect();
            for w in vals.windows(2) {
                assert!(w[1] >= w[0], "{} {:?}", d.family_name(), mode);
            }
            assert!(vals[0] > 0.0 && *vals.last().unwrap() <= d.mass() * (1.0 + 1e-12));
            assert!(vals[0] < 0.05 * d.mass());
            assert!(*vals.last().unwrap() > 0.99 * d.mass());
        }
    }
}

#[test]
fn heat_mass_off_center_is_increasing() {
    for d in families(16.0 * PI) {
        let c = HeatMassCurve::new(&d, Point::new(0.7, -0.4));
        let vals: Vec<f64> = log_spaced(1e-2, 1e3, 50).into_iter().map(|s| c.eval(s).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] >= w[0]), "{}", d.family_name());
        assert!(*vals.last().unwrap() < d.mass());
    }
}

#[test]
fn laplace_path_identity() {
    for d in families(16.0 * PI) {
        let q = HeatMassCurve::with_mode(&d, d.center(), EvalMode::Quadrature).unwrap();
        let l = HeatMassCurve::with_mode(&d, d.center(), EvalMode::LaplaceRadial).unwrap();
        for s in log_spaced(1e-2, 1e4, 50) {
            let (a, b) = (q.eval(s).unwrap(), l.eval(s).unwrap());
            assert!(rel(a, b) <= 1e-8, "{} s={}: {} vs {}", d.family_name(), s, a, b);
        }
    }
}

#[test]
fn generalized_inverse_is_a_right_inverse() {
    for d in families(16.0 * PI) {
        for z in [d.center(), Point::new(0.4, 0.3)] {
            for &m in &[0.05, 0.3, 0.8, 0.95, 0.999] {
                let rho = d.generalized_inverse(z, m).unwrap();
                let g = d.mass_fraction(z, rho).unwrap();
                assert!(g >= m * (1.0 - 1e-10), "{} m={} g={}", d.family_name(), m, g);
                assert!(rel(g, m) <= 1e-8, "{} m={} g={}", d.family_name(), m, g);
            }
        }
    }
}

#[test]
fn beta_variance_is_non_decreasing() {
    let grid = CartesianGrid::from_fn(40, 60, 0.1, Point::new(-3.0, -2.0), |p: Point<f64>| {
        (-(p.x - 0.5).powi(2) - 2.0 * p.y.powi(2)).exp() * 30.0
    })
    .unwrap();
    let mut data = families(16.0 * PI);
    data.push(InitialDatum::grid(grid, Point::origin()).unwrap());
    for d in data {
        let v: Vec<f64> = [1.0, 2.0, 3.0, 4.0, 6.0].iter().map(|&b| d.beta_variance(b).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)), "{} {:?}", d.family_name(), v);
    }
}

#[test]
fn ln_plus_zero_yields_infinite_estimates() {
    let d = InitialDatum::gaussian(16.0 * PI, 1.0, Point::origin()).unwrap();
    let l = MassConstants::new(d.mass()).unwrap().l;
    assert_eq!(tc1_objective(&d, d.center(), 2.0, 1e-6).unwrap(), f64::INFINITY);
    assert!(tc1_objective(&d, d.center(), 2.0, 100.0).unwrap().is_finite());
    assert_eq!(tc2_rho_objective(&d, d.center(), 0.1, l), f64::INFINITY);
    assert!(tc2_rho_objective(&d, d.center(), 5.0, l).is_finite());
}

#[test]
fn subcritical_mass_is_rejected_everywhere() {
    let cfg = BoundConfig::default();
    for &m in &[1.0, 8.0 * PI] {
        for d in families(m) {
            let sub = |e: Error| matches!(e, Error::SubcriticalMass { .. });
            assert!(sub(tc_bound(&d, &cfg).unwrap_err()));
            assert!(sub(tc1_bound(&d, &cfg).unwrap_err()));
            assert!(sub(tc2_bound(&d, &cfg).unwrap_err()));
            assert!(sub(tc4_bound(&d, 2.0, &cfg).unwrap_err()));
            assert!(sub(virial_bound(&d).unwrap_err()));
            assert!(sub(lower_bound(&d, f64::INFINITY).unwrap_err()));
            assert!(sub(full_report(&d, &cfg).unwrap_err()));
            assert!(sub(mass_constants(m).unwrap_err()));
        }
    }
}

#[test]
fn critical_time_diverges_as_mass_decreases_to_critical() {
    let cfg = BoundConfig::default();
    let eps = log_spaced(1e-6, 1.0, 12);
    for make in [
        |m: f64| InitialDatum::gaussian(m, 1.0, Point::origin()).unwrap(),
        |m: f64| InitialDatum::disk(m / PI, 1.0, Point::origin()).unwrap(),
    ] {
        let tc: Vec<f64> = eps.iter().rev().map(|e| tc_bound(&make(8.0 * PI * (1.0 + e)), &cfg).unwrap().value).collect();
        assert!(tc.windows(2).all(|w| w[1] > w[0]));
        assert!(*tc.last().unwrap() > 1e5);
    }
}

#[test]
fn gaussian_sandwich() {
    let cfg = BoundConfig::default();
    for &m in &common::MASSES {
        let d = InitialDatum::gaussian(m, 1.7, Point::origin()).unwrap();
        let tc = tc_bound(&d, &cfg).unwrap().value;
        let t4 = tc4_bound(&d, 2.0, &cfg).unwrap().value;
        assert!(c0::<f64>() * t4 <= tc && tc <= t4);
    }
}

#[test]
fn grid_report_is_ordered_and_near_the_disk() {
    let n = 160;
    let h = 2.4 / n as f64;
    let g = CartesianGrid::from_fn(n, n, h, Point::new(-1.2, -1.2), |p: Point<f64>| if p.norm() <= 1.0 { 16.0 } else { 0.0 })
        .unwrap();
    let d = InitialDatum::grid(g, Point::new(2.0, -1.0)).unwrap();
    let r = full_report(&d, &BoundConfig::default()).unwrap();
    assert!(r.is_ordered(), "{:?}", r.violations);
    let exact = pks_core::oracles::oracle_disk(16.0 * PI, 1.0).unwrap().value;
    assert!(rel(r.value("tc").unwrap(), exact) < 2e-2);
    let t3 = r.value("tc3").unwrap();
    assert!(rel(t3, 1.0 / (4.0 * 1.25_f64.ln())) < 3e-2);
    assert!(matches!(r.row("f_method").unwrap().status, Status::Inapplicable(_)));
}

#[test]
fn single_precision_report() {
    let d = InitialDatum::<f32>::disk(16.0, 1.0, Point::origin()).unwrap();
    let r = full_report(&d, &BoundConfig::default()).unwrap();
    assert!(r.is_ordered(), "{:?}", r.violations);
    assert!((r.value("tc").unwrap() - 0.538_546).abs() < 1e-3);
    assert!((r.value("tc4").unwrap() - 0.560_178).abs() < 1e-3);
}

fn jung_grid() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (2usize..12, 2usize..12).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(prop_oneof![Just(0.0), 0.1f64..5.0], r * c))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jung_inequalities_on_random_supports((rows, cols, mut values) in jung_grid(), h in 0.05f64..2.0) {
        if values.iter().all(|v| *v == 0.0) {
            values[0] = 1.0;
        }
        let g = CartesianGrid::new(rows, cols, h, Point::new(-1.0, 3.0), values).unwrap();
        let d = InitialDatum::grid(g, Point::origin()).unwrap();
        let geo = d.support_geometry().unwrap();
        let slack = 1e-9 * geo.diameter;
        prop_assert!(geo.diameter / 2.0 <= geo.r0 + slack);
        prop_assert!(geo.r0 <= geo.diameter / 3f64.sqrt() + slack);
    }

    #[test]
    fn heat_mass_monotone_in_s_for_random_gaussian(m in 26.0f64..400.0, sigma in 0.05f64..5.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
        let d = InitialDatum::gaussian(m, sigma, Point::origin()).unwrap();
        let c = HeatMassCurve::new(&d, Point::new(x, y));
        let vals: Vec<f64> = log_spaced(1e-3, 1e3, 20).into_iter().map(|s| c.eval(s).unwrap()).collect();
        prop_assert!(vals.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(vals.iter().all(|v| *v >= 0.0 && *v <= m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn estimators_are_translation_invariant(x in -10.0f64..10.0, y in -10.0f64..10.0, k in 0usize..5) {
        let cfg = BoundConfig::default();
        let m = 16.0 * PI;
        let base = full_report(&families(m)[k], &cfg).unwrap();
        let z = Point::new(x, y);
        prop_assume!(z.norm() <= 10.0);
        let moved = full_report(&families_at(m, z)[k], &cfg).unwrap();
        for (a, b) in base.rows.iter().zip(&moved.rows) {
            prop_assert_eq!(&a.name, &b.name);
            prop_assert_eq!(a.status.tag(), b.status.tag());
            if a.value.is_finite() {
                prop_assert!(rel(b.value, a.value) <= 1e-6, "{}: {} vs {}", a.name, a.value, b.value);
            }
        }
    }
}
