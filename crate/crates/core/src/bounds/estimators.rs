use crate::bounds::constants::MassConstants;
use crate::bounds::search::{minimize_over_centers, BoundConfig, SearchCertificate};
use crate::datum::{InitialDatum, SupportGeometry};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::heatmass::{EvalMode, HeatMassCurve};
use crate::numeric::optimize::{compass_search, grid_then_golden};
use crate::scalar::Scalar;

/// `T*_{c,z} = H_z^{-1}(L)` at a single center.
pub fn tc_at<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, cfg: &BoundConfig<S>) -> Result<S> {
    let k = MassConstants::new(datum.mass())?;
    let curve = if cfg.force_quadrature {
        HeatMassCurve::with_mode(datum, z, EvalMode::Quadrature)?
    } else {
        HeatMassCurve::new(datum, z)
    };
    curve.invert(k.l, &cfg.inversion)
}

/// `T*_c(n₀)` together with the center where it was attained.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalTime<S> {
    pub value: S,
    pub certificate: SearchCertificate<S>,
}

/// `T*_c(n₀) = inf_z H_z^{-1}(L(M))`.
///
/// Non-increasing radial data use `z = z₀`; otherwise the infimum is
/// searched (see [`minimize_over_centers`]).
pub fn tc_bound<S: Scalar>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>) -> Result<CriticalTime<S>> {
    MassConstants::new(datum.mass())?;
    if datum.is_nonincreasing_radial() {
        let z = datum.center();
        let v = tc_at(datum, z, cfg)?;
        return Ok(CriticalTime { value: v, certificate: SearchCertificate::fixed(z, v) });
    }
    let cert = minimize_over_centers(datum, cfg, |z| tc_at(datum, z, cfg).unwrap_or(S::infinity()));
    if !cert.value.is_finite() {
        return Err(Error::BracketFailure { iterations: cfg.inversion.max_bracket_steps });
    }
    Ok(CriticalTime { value: cert.value, certificate: cert })
}

/// `T*_v = 2π V₂(n₀) / (M - 8π)`.
pub fn virial_bound<S: Scalar>(datum: &InitialDatum<S>) -> Result<S> {
    let k = MassConstants::new(datum.mass())?;
    let v2 = datum.beta_variance(S::lit(2.0))?;
    Ok(S::lit(2.0) * S::PI() * v2 / k.excess())
}

fn ln_plus<S: Scalar>(x: S) -> S {
    if x > S::one() {
        x.ln()
    } else {
        S::zero()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tc1<S> {
    pub value: S,
    pub q: S,
    pub lambda: S,
    pub z: Point<S>,
}

/// `∫ ω_{q,λ}(x - z) n₀(x) dx` with `ω_{q,λ}(x) = exp(-c |x|^{2q/(q-1)})`,
/// `c = ((q-1)/q)(4λ)^{-q/(q-1)}`.
pub fn omega_convolution<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, q: S, lambda: S) -> S {
    let p = q / (q - S::one());
    // c |x|^{2p} = (1/p) (|x|²/4λ)^p
    let inv4l = S::one() / (S::lit(4.0) * lambda);
    let inv_p = S::one() / p;
    datum.weighted_mass(z, |d2| (-inv_p * (d2 * inv4l).powf(p)).exp())
}

fn tc1_value<S: Scalar>(w: S, l: S, q: S, lambda: S) -> S {
    let lp = ln_plus(w / l);
    if lp == S::zero() {
        return S::infinity();
    }
    lambda * q.powf(-q.recip()) * lp.powf(-q.recip())
}

/// The `T*_{c1}` objective at fixed `(q, λ)` and center `z`; `+∞` when
/// `(ω_{q,λ} ⋆ n₀)(z) <= L`.
pub fn tc1_objective<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, q: S, lambda: S) -> Result<S> {
    let k = MassConstants::new(datum.mass())?;
    if !(q > S::one() && lambda > S::zero()) {
        return Err(Error::param("q, lambda", format!("need q > 1 and lambda > 0, got q = {}, lambda = {}", q, lambda)));
    }
    Ok(tc1_value(omega_convolution(datum, z, q, lambda), k.l, q, lambda))
}

/// `(ρ²/4) [ln₊(M_z(ρ)/L)]^{-1}`; `+∞` when `M_z(ρ) <= L`.
pub fn tc2_rho_objective<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, rho: S, l: S) -> S {
    let m = datum.radial_mass(z, rho).unwrap_or(S::zero());
    let lp = ln_plus(m / l);
    if lp == S::zero() {
        S::infinity()
    } else {
        rho * rho / (S::lit(4.0) * lp)
    }
}

/// Best `λ` at fixed `q` and `z`, searched in `ln λ`.
fn tc1_best_lambda<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, q: S, l: S, cfg: &BoundConfig<S>) -> (S, S) {
    let t0 = datum.length_scale().powi(2);
    let lo = (t0 * S::lit(1e-4)).ln();
    let hi = (t0 * S::lit(1e4)).ln();
    let f = |u: S| {
        let lambda = u.exp();
        tc1_value(omega_convolution(datum, z, q, lambda), l, q, lambda)
    };
    let m = grid_then_golden(f, lo, hi, 33, cfg.search_tol);
    (m.value, m.x.exp())
}

fn tc1_at<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, l: S, cfg: &BoundConfig<S>) -> Tc1<S> {
    // Outer search over ln(q - 1) ∈ [ln 0.01, ln 100].
    let f = |u: S| tc1_best_lambda(datum, z, S::one() + u.exp(), l, cfg).0;
    let m = grid_then_golden(f, S::lit(0.01_f64.ln()), S::lit(100.0_f64.ln()), 13, S::lit(1e-6));
    let q = S::one() + m.x.exp();
    let (value, lambda) = tc1_best_lambda(datum, z, q, l, cfg);
    Tc1 { value, q, lambda, z }
}

/// `T*_{c1} = inf_{q>1, λ>0} λ q^{-1/q} [ln₊(‖ω_{q,λ} ⋆ n₀‖_∞ / L)]^{-1/q}`.
///
/// Any `z` gives `(ω ⋆ n₀)(z) <= ‖ω ⋆ n₀‖_∞`, so evaluating at a single
/// center is still an upper bound. Non-increasing radial data use the
/// center, where the sup norm is attained. Otherwise `(q, λ)` is optimized
/// at the barycenter, the convolution is maximized over `z` at that pair, and `λ` is
/// re-optimized at the new center. `+∞` means `ln₊` vanished everywhere.
pub fn tc1_bound<S: Scalar>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>) -> Result<Tc1<S>> {
    let k = MassConstants::new(datum.mass())?;
    let mut best = tc1_at(datum, datum.barycenter(), k.l, cfg);
    if datum.is_nonincreasing_radial() || !best.value.is_finite() {
        return Ok(best);
    }
    let (q, lambda) = (best.q, best.lambda);
    let cert = minimize_over_centers(datum, cfg, |z| -omega_convolution(datum, z, q, lambda));
    if cert.z != best.z {
        let (value, lambda) = tc1_best_lambda(datum, cert.z, q, k.l, cfg);
        if value < best.value {
            best = Tc1 { value, q, lambda, z: cert.z };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tc2<S> {
    pub value: S,
    pub rho_form: S,
    pub theta_form: S,
    pub rho: S,
    pub theta: S,
    pub z: Point<S>,
}

/// `inf_ρ (ρ²/4) [ln₊(M_z(ρ)/L)]^{-1}` at fixed `z`, with its minimizer.
pub fn tc2_rho_form<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, cfg: &BoundConfig<S>) -> Result<(S, S)> {
    let k = MassConstants::new(datum.mass())?;
    let rho_a = datum.generalized_inverse(z, k.a)?;
    let rho_top = match datum.generalized_inverse(z, S::one()) {
        Ok(r) => r,
        Err(Error::Unbounded) => datum.generalized_inverse(z, S::one() - S::lit(1e-12).max(S::epsilon() * S::lit(8.0)))?,
        Err(e) => return Err(e),
    };
    let rho_top = rho_top.max(rho_a * S::lit(2.0));
    let f = |u: S| tc2_rho_objective(datum, z, u.exp(), k.l);
    let m = grid_then_golden(f, rho_a.ln(), rho_top.ln(), 49, cfg.search_tol);
    Ok((m.value, m.x.exp()))
}

/// `(1/(4 ln(1/a))) inf_θ [g_z^←(a^θ)]² / (1 - θ)` at fixed `z`, with its
/// minimizer.
pub fn tc2_theta_form<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, cfg: &BoundConfig<S>) -> Result<(S, S)> {
    let k = MassConstants::new(datum.mass())?;
    let lo = S::lit(1e-9);
    let hi = S::one() - S::lit(1e-6);
    let f = |theta: S| match datum.generalized_inverse(z, k.a.powf(theta)) {
        Ok(r) => r * r / (S::one() - theta),
        Err(_) => S::infinity(),
    };
    let m = grid_then_golden(f, lo, hi, 49, cfg.search_tol);
    Ok((m.value / (S::lit(4.0) * k.log_inv_a), m.x))
}

/// `T*_{c2}`: both the `ρ`-form and `θ`-form at the best center, reporting
/// the smaller.
pub fn tc2_bound<S: Scalar>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>) -> Result<Tc2<S>> {
    MassConstants::new(datum.mass())?;
    let z = if datum.is_nonincreasing_radial() {
        datum.center()
    } else {
        minimize_over_centers(datum, cfg, |z| tc2_rho_form(datum, z, cfg).map(|r| r.0).unwrap_or(S::infinity())).z
    };
    let (rho_form, rho) = tc2_rho_form(datum, z, cfg)?;
    let (theta_form, theta) = tc2_theta_form(datum, z, cfg)?;
    Ok(Tc2 { value: rho_form.min(theta_form), rho_form, theta_form, rho, theta, z })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tc3<S> {
    pub value: S,
    pub jung: S,
    pub geometry: SupportGeometry<S>,
}

/// `T*_{c3} = R₀² / (4 ln(1/a))` and the Jung variant `D² / (12 ln(1/a))`.
pub fn tc3_bound<S: Scalar>(datum: &InitialDatum<S>) -> Result<Tc3<S>> {
    let k = MassConstants::new(datum.mass())?;
    let g = datum.support_geometry()?;
    let four = S::lit(4.0);
    Ok(Tc3 {
        value: g.r0 * g.r0 / (four * k.log_inv_a),
        jung: g.diameter * g.diameter / (S::lit(12.0) * k.log_inv_a),
        geometry: g,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tc4<S> {
    pub value: S,
    pub beta: S,
    /// `V_β / (4 ln(1/a))`.
    pub variance_form: S,
    /// `inf_z [(1/M) ∫ |x - z|^β n₀]^{2/β} / (4 ln(1/a))`.
    pub infimum_form: S,
    pub z: Point<S>,
}

/// `T*_{c4}` for `β >= 2`.
///
/// Radial data attain the infimum over `z` at `z₀` (the moment is convex
/// and symmetric about it); grids use a compass search from the seeds.
pub fn tc4_bound<S: Scalar>(datum: &InitialDatum<S>, beta: S, cfg: &BoundConfig<S>) -> Result<Tc4<S>> {
    if !(beta >= S::lit(2.0)) {
        return Err(Error::param("beta", format!("must be >= 2, got {}", beta)));
    }
    let k = MassConstants::new(datum.mass())?;
    let denom = S::lit(4.0) * k.log_inv_a;
    let vb = datum.beta_variance(beta)?;
    let variance_form = vb / denom;
    let expo = S::lit(2.0) / beta;
    if datum.is_radial() || beta == S::lit(2.0) {
        let z = datum.barycenter();
        return Ok(Tc4 { value: variance_form, beta, variance_form, infimum_form: variance_form, z });
    }
    let c = datum.center();
    let seeds: Vec<Point<S>> = datum.search_seeds().iter().map(|p| p.sub(&c)).collect();
    let scale = datum.length_scale();
    let s = compass_search(
        |p: Point<S>| datum.moment_about(p.add(&c), beta).unwrap_or(S::infinity()),
        &seeds,
        scale * S::lit(0.25),
        scale * S::lit(1e-5),
        cfg.max_search_evals,
    );
    let infimum_form = s.value.powf(expo) / denom;
    Ok(Tc4 { value: variance_form.min(infimum_form), beta, variance_form, infimum_form, z: s.point.add(&c) })
}
