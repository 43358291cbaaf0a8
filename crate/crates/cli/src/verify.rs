//! Built-in oracle-equivalence and invariant suites.

use std::f64::consts::PI;

use pks_core::bounds::{c0, full_report, heat_constant, kappa, p0, tc_at, tc_bound, BoundConfig};
use pks_core::datum::InitialDatum;
use pks_core::geometry::Point;
use pks_core::oracles::{f_inverse, oracle_disk, oracle_gaussian, oracles_for};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Families,
    Constants,
    Ordering,
    All,
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn families(m: f64) -> Vec<InitialDatum<f64>> {
    let o = Point::origin();
    [
        InitialDatum::gaussian(m, 1.0, o),
        InitialDatum::disk(m / PI, 1.0, o),
        InitialDatum::annulus(m / (3.0 * PI), 1.0, 2.0, o),
        InitialDatum::poly_gaussian(m / PI, 1, 1.0, o),
        InitialDatum::diff_gaussians(2.0 * m / PI, 1.0, 2.0, o),
    ]
    .into_iter()
    .map(|d| d.expect("valid family parameters"))
    .collect()
}

const MASSES: [f64; 3] = [9.0 * PI, 16.0 * PI, 100.0 * PI];

fn constants_suite() -> Vec<Check> {
    let f = f_inverse(2.0 / 3.0).unwrap_or(f64::NAN);
    let c = heat_constant(2, 1.0, f64::INFINITY).unwrap_or(f64::NAN);
    let diag = [1.0, 2.0, 5.0, f64::INFINITY].iter().all(|&p| heat_constant(2, p, p).map(|v| v == 1.0).unwrap_or(false));
    vec![
        check("f^-1(2/3)", (f - 0.87421).abs() <= 1e-4, format!("{:.6}", f)),
        check("c0 = 2 ln(3/2)", (c0::<f64>() - 0.8109).abs() < 1e-4, format!("{:.6}", c0::<f64>())),
        check("p0 = 1/ln(2e/3)", (p0::<f64>() - 1.682).abs() < 1e-3, format!("{:.6}", p0::<f64>())),
        check("kappa = (2e/3) ln(3/2)", (kappa::<f64>() - 0.735).abs() < 1e-3, format!("{:.6}", kappa::<f64>())),
        check("C(2,p,p) = 1", diag, "p in {1, 2, 5, inf}"),
        check("C(2,1,inf) = 1/(4 pi)", rel(c, 1.0 / (4.0 * PI)) < 1e-14, format!("{:.12}", c)),
    ]
}

fn families_suite(cfg: &BoundConfig<f64>) -> Vec<Check> {
    let quad = BoundConfig { force_quadrature: true, ..cfg.clone() };
    let mut out = Vec::new();
    for &(sigma, m) in &[(1.0, 16.0 * PI), (0.5, 10.0 * PI), (2.0, 100.0 * PI)] {
        let d = InitialDatum::gaussian(m, sigma, Point::origin()).expect("valid gaussian");
        let t = tc_at(&d, d.center(), &quad).unwrap_or(f64::NAN);
        let o = oracle_gaussian(m, sigma).map(|o| o.value).unwrap_or(f64::NAN);
        out.push(check(format!("gaussian sigma={} M={}pi", sigma, m / PI), rel(t, o) <= 1e-6, format!("{} vs {}", t, o)));
    }
    for &m in &MASSES {
        let d = InitialDatum::disk(m / PI, 1.0, Point::origin()).expect("valid disk");
        let t = tc_at(&d, d.center(), &quad).unwrap_or(f64::NAN);
        let o = oracle_disk(m, 1.0).map(|o| o.value).unwrap_or(f64::NAN);
        out.push(check(format!("disk R=1 M={}pi", m / PI), rel(t, o) <= 1e-6, format!("{} vs {}", t, o)));
    }
    for &m in &MASSES {
        for d in families(m).into_iter().skip(2) {
            let o = oracles_for(&d).ok().and_then(|v| v.into_iter().next()).map(|o| o.value).unwrap_or(f64::NAN);
            let t = tc_bound(&d, cfg).map(|t| t.value).unwrap_or(f64::NAN);
            out.push(check(
                format!("{} M={}pi bounds tc", d.family_name(), m / PI),
                t <= o * (1.0 + 1e-6),
                format!("tc {} <= oracle {}", t, o),
            ));
        }
    }
    out
}

fn ordering_suite(cfg: &BoundConfig<f64>) -> Vec<Check> {
    let mut out = Vec::new();
    for &m in &MASSES {
        for d in families(m) {
            let name = format!("{} M={}pi", d.family_name(), m / PI);
            match full_report(&d, cfg) {
                Ok(r) => {
                    let detail = if r.is_ordered() {
                        format!("{} rows", r.rows.len())
                    } else {
                        r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
                    };
                    out.push(check(name, r.is_ordered(), detail));
                }
                Err(e) => out.push(check(name, false, e.to_string())),
            }
        }
    }
    out
}

pub fn run_suite(suite: Suite, cfg: &BoundConfig<f64>) -> Vec<Check> {
    match suite {
        Suite::Constants => constants_suite(),
        Suite::Families => families_suite(cfg),
        Suite::Ordering => ordering_suite(cfg),
        Suite::All => {
            let mut v = constants_suite();
            v.extend(families_suite(cfg));
            v.extend(ordering_suite(cfg));
            v
        }
    }
}
