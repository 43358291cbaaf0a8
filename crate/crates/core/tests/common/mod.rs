#![allow(dead_code)]

use pks_core::datum::InitialDatum;
use pks_core::geometry::Point;
use std::f64::consts::PI;

pub const MASSES: [f64; 3] = [9.0 * PI, 16.0 * PI, 100.0 * PI];

/// One member of each analytic family with total mass `m`, centered at `c`.
pub fn families_at(m: f64, c: Point<f64>) -> Vec<InitialDatum<f64>> {
    vec![
        InitialDatum::gaussian(m, 1.0, c).unwrap(),
        InitialDatum::disk(m / PI, 1.0, c).unwrap(),
        InitialDatum::annulus(m / (3.0 * PI), 1.0, 2.0, c).unwrap(),
        InitialDatum::poly_gaussian(m / PI, 1, 1.0, c).unwrap(),
        InitialDatum::diff_gaussians(2.0 * m / PI, 1.0, 2.0, c).unwrap(),
    ]
}

pub fn families(m: f64) -> Vec<InitialDatum<f64>> {
    families_at(m, Point::origin())
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}
