//! Closed-form reference values for the analytic families.
//!
//! These deliberately avoid the heat-mass machinery: every inverse is taken
//! with the plain bisection below, to absolute width `1e-12`.

use crate::bounds::MassConstants;
use crate::datum::{DatumKind, InitialDatum};
use crate::error::{Error, Result};
use crate::scalar::{critical_mass, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult<S> {
    pub family: &'static str,
    pub params: Vec<(&'static str, S)>,
    pub value: S,
    /// Descriptive identifier of the formula.
    pub formula: &'static str,
    /// `true` when the value is `T*_c` itself rather than an upper bound.
    pub exact: bool,
}

const ABS_TOL: f64 = 1e-12;

// Root of a decreasing function on [lo, hi] with f(lo) >= target > f(hi).
fn bisect_decreasing<S: Scalar, F: Fn(S) -> S>(f: F, target: S, mut lo: S, mut hi: S) -> S {
    let tol = S::lit(ABS_TOL).max(S::epsilon() * hi.abs() * S::lit(4.0));
    for _ in 0..2000 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) * S::lit(0.5);
        if f(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * S::lit(0.5)
}

fn f_disk<S: Scalar>(lambda: S) -> S {
    if lambda == S::zero() {
        S::one()
    } else {
        -(-lambda).exp_m1() / lambda
    }
}

/// `f⁻¹(v)` for `f(λ) = (1 - e^{-λ})/λ` and `v ∈ (0, 1)`.
pub fn f_inverse<S: Scalar>(v: S) -> Result<S> {
    if !(v > S::zero() && v < S::one()) {
        return Err(Error::param("v", format!("must lie in (0, 1), got {}", v)));
    }
    // f(1/v) = v (1 - e^{-1/v}) < v
    Ok(bisect_decreasing(f_disk, v, S::zero(), v.recip()))
}

fn check_positive<S: Scalar>(name: &'static str, v: S) -> Result<()> {
    if v > S::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {}", v)))
    }
}

/// `T*_c = 2σM/(M - 8π)`.
pub fn oracle_gaussian<S: Scalar>(mass: S, sigma: S) -> Result<OracleResult<S>> {
    check_positive("sigma", sigma)?;
    MassConstants::new(mass)?;
    Ok(OracleResult {
        family: "gaussian",
        params: vec![("mass", mass), ("sigma", sigma)],
        value: S::lit(2.0) * sigma * mass / (mass - critical_mass::<S>()),
        formula: "gaussian-exact",
        exact: true,
    })
}

/// `T*_c = R² / (4 f⁻¹(a))`.
pub fn oracle_disk<S: Scalar>(mass: S, radius: S) -> Result<OracleResult<S>> {
    check_positive("radius", radius)?;
    let k = MassConstants::new(mass)?;
    Ok(OracleResult {
        family: "disk",
        params: vec![("mass", mass), ("radius", radius)],
        value: radius * radius / (S::lit(4.0) * f_inverse(k.a)?),
        formula: "disk-exact",
        exact: true,
    })
}

/// Upper bound `1 / (4 h⁻¹(L/(σπ)))`, `h(s) = (e^{-R₁²s} - e^{-R₂²s})/s`.
pub fn oracle_annulus<S: Scalar>(sigma: S, r1: S, r2: S) -> Result<OracleResult<S>> {
    check_positive("sigma", sigma)?;
    check_positive("r1", r1)?;
    if !(r2 > r1) || !r2.is_finite() {
        return Err(Error::param("r2", "annulus needs r1 < r2"));
    }
    let mass = sigma * S::PI() * (r2 * r2 - r1 * r1);
    let k = MassConstants::new(mass)?;
    let h = |s: S| {
        if s == S::zero() {
            r2 * r2 - r1 * r1
        } else {
            (-r1 * r1 * s).exp() * (-(-(r2 * r2 - r1 * r1) * s).exp_m1()) / s
        }
    };
    let target = k.l / (sigma * S::PI());
    let mut hi = S::one() / (r2 * r2);
    while h(hi) >= target {
        hi = hi * S::lit(2.0);
    }
    let s = bisect_decreasing(h, target, S::zero(), hi);
    Ok(OracleResult {
        family: "annulus",
        params: vec![("sigma", sigma), ("r1", r1), ("r2", r2)],
        value: S::one() / (S::lit(4.0) * s),
        formula: "annulus-laplace-inverse",
        exact: false,
    })
}

/// Variance companion `(R₁² + R₂²) / (8 ln(1/a))`.
pub fn oracle_annulus_variance<S: Scalar>(sigma: S, r1: S, r2: S) -> Result<OracleResult<S>> {
    let mass = sigma * S::PI() * (r2 * r2 - r1 * r1);
    let k = MassConstants::new(mass)?;
    Ok(OracleResult {
        family: "annulus",
        params: vec![("sigma", sigma), ("r1", r1), ("r2", r2)],
        value: (r1 * r1 + r2 * r2) / (S::lit(8.0) * k.log_inv_a),
        formula: "annulus-variance",
        exact: false,
    })
}

/// Upper bound `(4α)⁻¹ [(1/a)^{1/(n+1)} - 1]⁻¹`.
pub fn oracle_polygaussian<S: Scalar>(sigma: S, n: u32, alpha: S) -> Result<OracleResult<S>> {
    check_positive("sigma", sigma)?;
    check_positive("alpha", alpha)?;
    let np1 = S::lit(f64::from(n) + 1.0);
    let mut fact = S::one();
    for j in 1..=n {
        fact = fact * S::lit(f64::from(j));
    }
    let mass = sigma * S::PI() * fact / alpha.powf(np1);
    let k = MassConstants::new(mass)?;
    // (1/a)^{1/(n+1)} - 1 = expm1(ln(1/a)/(n+1))
    let gap = (k.log_inv_a / np1).exp_m1();
    Ok(OracleResult {
        family: "poly_gaussian",
        params: vec![("sigma", sigma), ("n", S::lit(f64::from(n))), ("alpha", alpha)],
        value: S::one() / (S::lit(4.0) * alpha * gap),
        formula: "polygaussian-laplace-inverse",
        exact: false,
    })
}

/// Upper bound `[2(√((b-d)² + 4bd/a) - (b+d))]⁻¹`.
pub fn oracle_diffgaussians<S: Scalar>(sigma: S, d: S, b: S) -> Result<OracleResult<S>> {
    check_positive("sigma", sigma)?;
    if !(d > S::zero() && d < b && b.is_finite()) {
        return Err(Error::InvalidRates { d: d.as_f64(), b: b.as_f64() });
    }
    let mass = S::PI() * sigma / (d * b);
    let k = MassConstants::new(mass)?;
    let root = ((b - d) * (b - d) + S::lit(4.0) * b * d / k.a).sqrt();
    Ok(OracleResult {
        family: "diff_gaussians",
        params: vec![("sigma", sigma), ("d", d), ("b", b)],
        value: S::one() / (S::lit(2.0) * (root - (b + d))),
        formula: "diffgaussians-laplace-inverse",
        exact: false,
    })
}

/// Variance companion `((b+d)/(bd)) / (4 ln(1/a))`.
pub fn oracle_diffgaussians_variance<S: Scalar>(sigma: S, d: S, b: S) -> Result<OracleResult<S>> {
    if !(d > S::zero() && d < b) {
        return Err(Error::InvalidRates { d: d.as_f64(), b: b.as_f64() });
    }
    let mass = S::PI() * sigma / (d * b);
    let k = MassConstants::new(mass)?;
    Ok(OracleResult {
        family: "diff_gaussians",
        params: vec![("sigma", sigma), ("d", d), ("b", b)],
        value: (b + d) / (b * d) / (S::lit(4.0) * k.log_inv_a),
        formula: "diffgaussians-variance",
        exact: false,
    })
}

/// Disk asymptotics as `M ↓ 8π`: `2πR²/(M - 8π)` at fixed radius.
pub fn disk_asymptotic_fixed_radius<S: Scalar>(mass: S, radius: S) -> Result<S> {
    let k = MassConstants::new(mass)?;
    Ok(S::lit(2.0) * S::PI() * radius * radius / k.excess())
}

/// Disk asymptotics as `M ↓ 8π`: `16π/(σ(M - 8π))` at fixed height.
pub fn disk_asymptotic_fixed_height<S: Scalar>(mass: S, height: S) -> Result<S> {
    let k = MassConstants::new(mass)?;
    Ok(S::lit(16.0) * S::PI() / (height * k.excess()))
}

/// Every oracle that applies to `datum` (empty for profiles and grids).
pub fn oracles_for<S: Scalar>(datum: &InitialDatum<S>) -> Result<Vec<OracleResult<S>>> {
    Ok(match datum.kind() {
        DatumKind::Gaussian { mass, sigma } => vec![oracle_gaussian(*mass, *sigma)?],
        DatumKind::DiskIndicator { radius, .. } => vec![oracle_disk(datum.mass(), *radius)?],
        DatumKind::Annulus { height, r1, r2 } => {
            vec![oracle_annulus(*height, *r1, *r2)?, oracle_annulus_variance(*height, *r1, *r2)?]
        }
        DatumKind::PolyGaussian { height, n, alpha } => vec![oracle_polygaussian(*height, *n, *alpha)?],
        DatumKind::DiffGaussians { height, d, b } => {
            vec![oracle_diffgaussians(*height, *d, *b)?, oracle_diffgaussians_variance(*height, *d, *b)?]
        }
        DatumKind::RadialProfile(_) | DatumKind::CartesianGrid(_) => Vec::new(),
    })
}
