//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines are always printed.

mod common;

use common::{families, families_at, rel, MASSES};
use pks_core::bounds::*;
use pks_core::datum::{CartesianGrid, InitialDatum};
use pks_core::geometry::Point;
use pks_core::heatmass::{EvalMode, HeatMassCurve};
use pks_core::oracles::*;
use pks_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{E, PI};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn gaussian_exactness() -> Outcome {
    let cfg = BoundConfig { force_quadrature: true, ..BoundConfig::default() };
    let mut worst: f64 = 0.0;
    for &(sigma, m) in &[(1.0, 16.0 * PI), (0.5, 10.0 * PI), (2.0, 100.0 * PI)] {
        let d = InitialDatum::gaussian(m, sigma, Point::origin()).map_err(|e| e.to_string())?;
        let t = tc_at(&d, d.center(), &cfg).map_err(|e| e.to_string())?;
        let exact = 2.0 * sigma * m / (m - 8.0 * PI);
        worst = worst.max(rel(t, exact));
    }
    ensure(worst <= 1e-6, format!("max relative error {:.3e}", worst))?;
    Ok(format!("max relative error {:.3e}", worst))
}

fn f_inverse_constant() -> Outcome {
    let v = f_inverse(2.0_f64 / 3.0).map_err(|e| e.to_string())?;
    ensure((v - 0.87421).abs() <= 1e-4, format!("f^-1(2/3) = {}", v))?;
    Ok(format!("f^-1(2/3) = {:.6}", v))
}

fn disk_chain() -> Outcome {
    let d = InitialDatum::disk(16.0, 1.0, Point::origin()).map_err(|e| e.to_string())?;
    let r = full_report(&d, &BoundConfig::default()).map_err(|e| e.to_string())?;
    let y0 = 1.25_f64.ln();
    let lam = f_inverse(0.8_f64).map_err(|e| e.to_string())?;
    let expect = [
        ("lower", E.recip() / (4.0 * y0)),
        ("tc", 1.0 / (4.0 * lam)),
        ("tc4", 1.0 / (8.0 * y0)),
        ("tc2", 1.0 / (4.0 * y0)),
        ("tc3", 1.0 / (4.0 * y0)),
        ("tc3_jung", 1.0 / (3.0 * y0)),
    ];
    let mut got = Vec::new();
    for (name, want) in expect {
        let v = r.value(name).ok_or(format!("{} not computed", name))?;
        ensure(rel(v, want) <= 1e-3, format!("{} = {} vs {}", name, v, want))?;
        got.push(v);
    }
    // lower <= tc <= tc4 <= tc2 = tc3 <= jung
    ensure(got[0] <= got[1] && got[1] <= got[2] && got[2] <= got[3] && got[4] <= got[5], "chain not ordered")?;
    ensure(r.is_ordered(), format!("{:?}", r.violations))?;
    Ok(format!(
        "lower {:.4} <= tc {:.4} <= tc4 {:.4} <= tc2 {:.4} = tc3 {:.4} <= jung {:.4}",
        got[0], got[1], got[2], got[3], got[4], got[5]
    ))
}

fn gaussian_lower_equality() -> Outcome {
    let cfg = BoundConfig::default();
    let mut worst: (f64, f64) = (0.0, 0.0);
    for &m in &MASSES {
        let d = InitialDatum::gaussian(m, 1.0, Point::origin()).map_err(|e| e.to_string())?;
        let tc = tc_bound(&d, &cfg).map_err(|e| e.to_string())?.value;
        let a = MassConstants::new(m).map_err(|e| e.to_string())?.a;
        // Numeric maximization of the supremum form, not the closed form.
        let (sup, qp) = lower_sup_form(&d, f64::INFINITY).map_err(|e| e.to_string())?;
        let e1 = rel(sup, tc);
        let e2 = rel(qp, 1.0 / (1.0 - a));
        worst = (worst.0.max(e1), worst.1.max(e2));
    }
    ensure(worst.0 <= 1e-4 && worst.1 <= 1e-3, format!("value {:.3e}, maximizer {:.3e}", worst.0, worst.1))?;
    Ok(format!("value error {:.3e}, maximizer error {:.3e}", worst.0, worst.1))
}

fn translation_invariance() -> Outcome {
    let cfg = BoundConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut shifts = 0;
    for k in 0..5 {
        let base = full_report(&families(16.0 * PI)[k], &cfg).map_err(|e| e.to_string())?;
        for _ in 0..3 {
            let (r, t) = (rng.gen_range(0.0..10.0), rng.gen_range(0.0..2.0 * PI));
            let z = Point::new(r * t.cos(), r * t.sin());
            let moved = full_report(&families_at(16.0 * PI, z)[k], &cfg).map_err(|e| e.to_string())?;
            shifts += 1;
            for (a, b) in base.rows.iter().zip(&moved.rows) {
                ensure(a.name == b.name && a.status.tag() == b.status.tag(), format!("row {} changed", a.name))?;
                if a.value.is_finite() {
                    worst = worst.max(rel(b.value, a.value));
                }
            }
        }
    }
    ensure(worst <= 1e-6, format!("max relative change {:.3e}", worst))?;
    Ok(format!("{} shifts, max relative change {:.3e}", shifts, worst))
}

fn asymptotics() -> Outcome {
    let cfg = BoundConfig::default();
    let m = 8.0 * PI * (1.0 + 1e-3);
    let d = InitialDatum::disk(m / PI, 1.0, Point::origin()).map_err(|e| e.to_string())?;
    let tc = tc_bound(&d, &cfg).map_err(|e| e.to_string())?.value;
    let law = 2.0 * PI / (m - 8.0 * PI);
    let e1 = rel(tc, law);
    let g = InitialDatum::gaussian(m, 1.0, Point::origin()).map_err(|e| e.to_string())?;
    let ratio = tc4_bound(&g, 2.0, &cfg).map_err(|e| e.to_string())?.value / tc_bound(&g, &cfg).map_err(|e| e.to_string())?.value;
    ensure(e1 <= 0.02, format!("disk ratio error {:.3e}", e1))?;
    ensure((ratio - 1.0).abs() <= 1e-3, format!("gaussian tc4/tc = {}", ratio))?;
    Ok(format!("disk tc vs 2piR^2/(M-8pi) {:.3e}; gaussian tc4/tc - 1 = {:.3e}", e1, ratio - 1.0))
}

fn property_suites() -> Outcome {
    let mut checks = 0;
    let log_s: Vec<f64> = (0..50).map(|i| (1e-2f64.ln() + (1e6f64).ln() * i as f64 / 49.0).exp()).collect();
    for d in families(16.0 * PI) {
        let q = HeatMassCurve::with_mode(&d, d.center(), EvalMode::Quadrature).map_err(|e| e.to_string())?;
        let l = HeatMassCurve::with_mode(&d, d.center(), EvalMode::LaplaceRadial).map_err(|e| e.to_string())?;
        let mut prev = 0.0;
        for &s in &log_s {
            let (a, b) = (q.eval(s).map_err(|e| e.to_string())?, l.eval(s).map_err(|e| e.to_string())?);
            ensure(a >= prev && a > 0.0 && a <= d.mass(), format!("{}: H not increasing in range at s={}", d.family_name(), s))?;
            ensure(rel(a, b) <= 1e-8, format!("{}: Laplace identity off by {:.3e} at s={}", d.family_name(), rel(a, b), s))?;
            prev = a;
            checks += 2;
        }
        for &m in &[0.1, 0.5, 0.9, 0.99] {
            let rho = d.generalized_inverse(d.center(), m).map_err(|e| e.to_string())?;
            let g = d.mass_fraction(d.center(), rho).map_err(|e| e.to_string())?;
            ensure(rel(g, m) <= 1e-8, format!("{}: g(g^-1({})) = {}", d.family_name(), m, g))?;
            checks += 1;
        }
        let v: Vec<f64> = [1.0, 2.0, 3.0, 4.0].iter().map(|&b| d.beta_variance(b).unwrap_or(f64::NAN)).collect();
        ensure(v.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12)), format!("{}: V_beta not monotone", d.family_name()))?;
        checks += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (rows, cols) = (rng.gen_range(2..10), rng.gen_range(2..10));
        let mut vals: Vec<f64> = (0..rows * cols).map(|_| if rng.gen_bool(0.4) { rng.gen_range(0.1..3.0) } else { 0.0 }).collect();
        vals[0] = 1.0;
        let g = CartesianGrid::new(rows, cols, 0.3, Point::origin(), vals).map_err(|e| e.to_string())?;
        let geo = InitialDatum::grid(g, Point::origin()).and_then(|d| d.support_geometry()).map_err(|e| e.to_string())?;
        let s = 1e-9 * geo.diameter;
        ensure(geo.diameter / 2.0 <= geo.r0 + s && geo.r0 <= geo.diameter / 3f64.sqrt() + s, "Jung inequality violated")?;
        checks += 1;
    }
    let d = InitialDatum::gaussian(16.0 * PI, 1.0, Point::origin()).map_err(|e| e.to_string())?;
    let l = MassConstants::new(d.mass()).map_err(|e| e.to_string())?.l;
    ensure(tc1_objective(&d, d.center(), 2.0, 1e-6).map_err(|e| e.to_string())? == f64::INFINITY, "tc1 ln+ = 0 not infinite")?;
    ensure(tc2_rho_objective(&d, d.center(), 0.1, l) == f64::INFINITY, "tc2 ln+ = 0 not infinite")?;
    checks += 2;
    for dd in families(8.0 * PI) {
        ensure(
            matches!(full_report(&dd, &BoundConfig::default()), Err(Error::SubcriticalMass { .. })),
            format!("{} at M = 8pi not rejected", dd.family_name()),
        )?;
        checks += 1;
    }
    Ok(format!("{} checks", checks))
}

fn ordering_suite() -> Outcome {
    let cfg = BoundConfig::default();
    let mut rows = 0;
    for &m in &MASSES {
        for d in families(m) {
            let r = full_report(&d, &cfg).map_err(|e| e.to_string())?;
            ensure(r.tolerance <= 1e-6, "slack above 1e-6")?;
            ensure(
                r.is_ordered(),
                format!("{} M={}pi: {}", d.family_name(), m / PI, r.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")),
            )?;
            rows += r.rows.iter().filter(|e| e.status.is_computed()).count();
        }
    }
    Ok(format!("15 reports, {} computed rows ordered", rows))
}

fn constants_suite() -> Outcome {
    let c0v = c0::<f64>();
    let p0v = p0::<f64>();
    let kv = kappa::<f64>();
    ensure((c0v - 2.0 * 1.5_f64.ln()).abs() < 1e-15 && (c0v - 0.8109).abs() < 1e-4, format!("c0 = {}", c0v))?;
    ensure((p0v - 1.682).abs() < 1e-3, format!("p0 = {}", p0v))?;
    ensure((kv - 0.735).abs() < 1e-3, format!("kappa = {}", kv))?;
    for &p in &[1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
        let c = heat_constant(2, p, p).map_err(|e| e.to_string())?;
        ensure((c - 1.0).abs() < 1e-15, format!("C(2,{p},{p}) = {c}"))?;
    }
    let c = heat_constant(2, 1.0, f64::INFINITY).map_err(|e| e.to_string())?;
    ensure(rel(c, 1.0 / (4.0 * PI)) < 1e-14, format!("C(2,1,inf) = {}", c))?;
    Ok(format!("c0 {:.4}, p0 {:.4}, kappa {:.4}, C(2,1,inf) {:.6}", c0v, p0v, kv, c))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("gaussian exactness", gaussian_exactness),
        ("f^-1(2/3) constant", f_inverse_constant),
        ("disk chain at R=1, M=16pi", disk_chain),
        ("gaussian lower-bound equality", gaussian_lower_equality),
        ("translation invariance", translation_invariance),
        ("near-critical asymptotics", asymptotics),
        ("property suites", property_suites),
        ("ordering suite", ordering_suite),
        ("constants suite", constants_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {}: {}", i + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {}: {}", i + 1, name, why);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
