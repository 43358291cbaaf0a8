//! The heat-weighted mass `H_z(s) = ∫ exp(-|x - z|²/4s) n₀(x) dx`, its
//! monotone inverse, and the Laplace-transform path for radial data.

use crate::datum::{DatumKind, InitialDatum};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::numeric::roots::solve_increasing;
use crate::numeric::special::{bessel_i0e, factorial};
use crate::scalar::Scalar;

/// How `H` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Gaussian at any `z`; disk at its center.
    ClosedForm,
    /// Polar quadrature about the datum center, or cell summation for grids.
    Quadrature,
    /// `π (𝓛f)(1/4s)` at the center of a radial datum.
    LaplaceRadial,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InversionConfig<S> {
    pub rel_tol: S,
    pub max_bracket_steps: usize,
}

impl<S: Scalar> Default for InversionConfig<S> {
    fn default() -> Self {
        Self { rel_tol: S::solver_tol(), max_bracket_steps: 200 }
    }
}

impl<S: Scalar> InversionConfig<S> {
    pub fn new(rel_tol: S, max_bracket_steps: usize) -> Result<Self> {
        if !(rel_tol > S::zero()) || !rel_tol.is_finite() {
            return Err(Error::param("tol", format!("must be positive, got {}", rel_tol)));
        }
        Ok(Self { rel_tol, max_bracket_steps })
    }
}

/// `s ↦ H_{z,n₀}(s)` for a fixed datum and center.
#[derive(Debug, Clone)]
pub struct HeatMassCurve<'a, S> {
    datum: &'a InitialDatum<S>,
    z: Point<S>,
    mode: EvalMode,
}

fn at_center<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>) -> bool {
    z.dist(&datum.center()) <= S::epsilon() * datum.length_scale()
}

impl<'a, S: Scalar> HeatMassCurve<'a, S> {
    /// Picks the cheapest exact mode available at `z`.
    pub fn new(datum: &'a InitialDatum<S>, z: Point<S>) -> Self {
        let mode = if Self::supports(datum, z, EvalMode::ClosedForm) {
            EvalMode::ClosedForm
        } else if Self::supports(datum, z, EvalMode::LaplaceRadial)
            && !matches!(datum.kind(), DatumKind::RadialProfile(_))
        {
            EvalMode::LaplaceRadial
        } else {
            EvalMode::Quadrature
        };
        Self { datum, z, mode }
    }

    pub fn with_mode(datum: &'a InitialDatum<S>, z: Point<S>, mode: EvalMode) -> Result<Self> {
        if !Self::supports(datum, z, mode) {
            return Err(Error::param("mode", format!("{:?} is not available for this datum at this center", mode)));
        }
        Ok(Self { datum, z, mode })
    }

    pub fn supports(datum: &InitialDatum<S>, z: Point<S>, mode: EvalMode) -> bool {
        match mode {
            EvalMode::Quadrature => true,
            EvalMode::LaplaceRadial => datum.is_radial() && at_center(datum, z),
            EvalMode::ClosedForm => match datum.kind() {
                DatumKind::Gaussian { .. } => true,
                DatumKind::DiskIndicator { .. } => at_center(datum, z),
                _ => false,
            },
        }
    }

    pub fn datum(&self) -> &InitialDatum<S> {
        self.datum
    }

    pub fn z(&self) -> Point<S> {
        self.z
    }

    pub fn mode(&self) -> EvalMode {
        self.mode
    }

    pub fn eval(&self, s: S) -> Result<S> {
        if !(s > S::zero()) {
            return Err(Error::NonPositiveTime(s.as_f64()));
        }
        if s.is_infinite() {
            return Ok(self.datum.mass());
        }
        Ok(self.eval_positive(s))
    }

    fn eval_positive(&self, s: S) -> S {
        let four = S::lit(4.0);
        match self.mode {
            EvalMode::ClosedForm => match self.datum.kind() {
                DatumKind::Gaussian { mass, sigma } => {
                    let w2 = self.z.dist2(&self.datum.center());
                    s * *mass / (s + *sigma) * (-w2 / (four * (s + *sigma))).exp()
                }
                DatumKind::DiskIndicator { radius, .. } => {
                    let lambda = *radius * *radius / (four * s);
                    self.datum.mass() * f_disk(lambda)
                }
                _ => unreachable!("closed form checked at construction"),
            },
            EvalMode::LaplaceRadial => {
                S::PI() * laplace_eval(self.datum, S::one() / (four * s)).expect("radial datum checked at construction")
            }
            EvalMode::Quadrature => self.quadrature(s),
        }
    }

    fn quadrature(&self, s: S) -> S {
        let four = S::lit(4.0);
        if let Some(g) = self.datum.as_grid() {
            let rel = self.z.sub(&self.datum.center());
            let k = S::one() / (four * s);
            let sum: S = g.nonzero_cells().map(|(p, v)| v * (-p.dist2(&rel) * k).exp()).sum();
            return sum * g.cell_area();
        }
        let w = self.z.dist(&self.datum.center());
        let root = s.sqrt();
        let reach = root * S::lit(12.0);
        // The integrand peaks at the support radius nearest to w.
        let tail = self.datum.tail_radius(S::lit(1e-16).max(S::epsilon()));
        let peak = w.max(self.datum.inner_radius()).min(tail);
        let lo = (peak - reach).max(S::zero());
        let hi = (peak + reach).min(tail);
        let mut extra = vec![w];
        for k in [1.0, 2.0, 4.0, 8.0] {
            extra.push(w + root * S::lit(k));
            extra.push(w - root * S::lit(k));
        }
        let two = S::lit(2.0);
        let val = if w == S::zero() {
            self.datum.radial_quad(|r| r * (-r * r / (four * s)).exp(), lo, hi, &extra)
        } else {
            self.datum.radial_quad(
                |r| {
                    let d = r - w;
                    r * (-d * d / (four * s)).exp() * bessel_i0e(r * w / (two * s))
                },
                lo,
                hi,
                &extra,
            )
        };
        two * S::PI() * val
    }

    /// Solves `H(s) = target` for `s`.
    pub fn invert(&self, target: S, cfg: &InversionConfig<S>) -> Result<S> {
        let m = self.datum.mass();
        if !(target > S::zero() && target < m) {
            return Err(Error::TargetOutOfRange { target: target.as_f64(), mass: m.as_f64() });
        }
        let four = S::lit(4.0);
        let mut a = S::one();
        let mut fa = self.eval_positive(a);
        let (lo, hi, flo, fhi) = if fa < target {
            let mut steps = 0;
            loop {
                let b = a * four;
                let fb = self.eval_positive(b);
                if fb >= target {
                    break (a, b, fa, fb);
                }
                a = b;
                fa = fb;
                steps += 1;
                if steps >= cfg.max_bracket_steps || !b.is_finite() {
                    return Err(Error::BracketFailure { iterations: steps });
                }
            }
        } else {
            let mut steps = 0;
            loop {
                let b = a / four;
                let fb = self.eval_positive(b);
                if fb < target {
                    break (b, a, fb, fa);
                }
                a = b;
                fa = fb;
                steps += 1;
                if steps >= cfg.max_bracket_steps || b == S::zero() {
                    return Err(Error::BracketFailure { iterations: steps });
                }
            }
        };
        let root = solve_increasing(|s| self.eval_positive(s), target, lo, hi, flo, fhi, cfg.rel_tol, 400);
        Ok(root.x)
    }
}

/// `f(λ) = (1 - e^{-λ}) / λ`, with `f(0) = 1`.
pub fn f_disk<S: Scalar>(lambda: S) -> S {
    if lambda == S::zero() {
        S::one()
    } else {
        -(-lambda).exp_m1() / lambda
    }
}

/// `H_{z,n₀}(s)` using the best available mode.
pub fn eval_heat_mass<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, s: S) -> Result<S> {
    HeatMassCurve::new(datum, z).eval(s)
}

/// `H_{z,n₀}^{-1}(target)`.
pub fn invert_heat_mass<S: Scalar>(datum: &InitialDatum<S>, z: Point<S>, target: S, cfg: &InversionConfig<S>) -> Result<S> {
    HeatMassCurve::new(datum, z).invert(target, cfg)
}

/// Laplace transform `(𝓛f)(v) = ∫_0^∞ e^{-vu} ñ(√u) du` of a radial datum.
pub fn laplace_eval<S: Scalar>(datum: &InitialDatum<S>, v: S) -> Result<S> {
    if !(v > S::zero()) {
        return Err(Error::param("v", format!("must be positive, got {}", v)));
    }
    let one = S::one();
    Ok(match datum.kind() {
        DatumKind::Gaussian { mass, sigma } => *mass / (S::PI() * (one + S::lit(4.0) * *sigma * v)),
        DatumKind::DiskIndicator { height, radius } => *height * (-(-*radius * *radius * v).exp_m1()) / v,
        DatumKind::Annulus { height, r1, r2 } => {
            *height * (-*r1 * *r1 * v).exp() * (-(-(*r2 * *r2 - *r1 * *r1) * v).exp_m1()) / v
        }
        DatumKind::PolyGaussian { height, n, alpha } => {
            *height * factorial::<S>(*n) / (*alpha + v).powi(*n as i32 + 1)
        }
        DatumKind::DiffGaussians { height, d, b } => *height / ((*d + v) * (*b + v)),
        DatumKind::RadialProfile(p) => {
            let outer = *p.knots().last().expect("profile has knots");
            let two = S::lit(2.0);
            datum.radial_quad(|r| two * r * (-v * r * r).exp(), S::zero(), outer, &[])
        }
        DatumKind::CartesianGrid(_) => return Err(Error::NotRadial),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{CartesianGrid, RadialProfile};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn o() -> Point<f64> {
        Point::origin()
    }

    fn families() -> Vec<InitialDatum<f64>> {
        vec![
            InitialDatum::gaussian(16.0 * PI, 1.0, o()).unwrap(),
            InitialDatum::disk(16.0, 1.0, o()).unwrap(),
            InitialDatum::annulus(16.0 / 3.0, 1.0, 2.0, o()).unwrap(),
            InitialDatum::poly_gaussian(16.0, 1, 1.0, o()).unwrap(),
            InitialDatum::poly_gaussian(16.0, 3, 2.0, o()).unwrap(),
            InitialDatum::diff_gaussians(32.0, 1.0, 2.0, o()).unwrap(),
            InitialDatum::radial_profile(RadialProfile::new(vec![0.2, 0.5, 1.5], vec![30.0, 20.0, 0.0]).unwrap(), o())
                .unwrap(),
        ]
    }

    #[test]
    fn gaussian_half_mass_at_s_equal_sigma() {
        let g = InitialDatum::gaussian(16.0 * PI, 1.5, Point::new(2.0, 1.0)).unwrap();
        let h = eval_heat_mass(&g, g.center(), 1.5).unwrap();
        assert_relative_eq!(h, 8.0 * PI, max_relative = 1e-15);
    }

    #[test]
    fn disk_closed_form() {
        let d = InitialDatum::disk(16.0, 1.0, o()).unwrap();
        let c = HeatMassCurve::new(&d, o());
        assert_eq!(c.mode(), EvalMode::ClosedForm);
        let s = 0.3;
        assert_relative_eq!(c.eval(s).unwrap(), d.mass() * (1.0 - (-1.0_f64 / (4.0 * s)).exp()) * 4.0 * s);
    }

    #[test]
    fn non_positive_time_is_rejected() {
        let d = InitialDatum::disk(16.0, 1.0, o()).unwrap();
        assert_eq!(eval_heat_mass(&d, o(), 0.0), Err(Error::NonPositiveTime(0.0)));
    }

    #[test]
    fn large_time_tends_to_mass() {
        for d in families() {
            let h = eval_heat_mass(&d, o(), 1e9).unwrap();
            assert_relative_eq!(h, d.mass(), max_relative = 1e-8);
        }
    }

    #[test]
    fn quadrature_matches_closed_forms() {
        let g = InitialDatum::gaussian(16.0 * PI, 1.0, Point::new(1.0, 1.0)).unwrap();
        let d = InitialDatum::disk(16.0, 1.0, Point::new(1.0, 1.0)).unwrap();
        for z in [Point::new(1.0, 1.0), Point::new(1.7, 0.4), Point::new(-3.0, 4.0)] {
            for &s in &[1e-3, 0.05, 0.7, 3.0, 40.0] {
                let closed = HeatMassCurve::with_mode(&g, z, EvalMode::ClosedForm).unwrap().eval(s).unwrap();
                let quad = HeatMassCurve::with_mode(&g, z, EvalMode::Quadrature).unwrap().eval(s).unwrap();
                assert_relative_eq!(quad, closed, max_relative = 1e-8);
            }
        }
        for &s in &[1e-3, 0.05, 0.7, 3.0, 40.0] {
            let closed = HeatMassCurve::with_mode(&d, d.center(), EvalMode::ClosedForm).unwrap().eval(s).unwrap();
            let quad = HeatMassCurve::with_mode(&d, d.center(), EvalMode::Quadrature).unwrap().eval(s).unwrap();
            assert_relative_eq!(quad, closed, max_relative = 1e-8);
        }
    }

    #[test]
    fn laplace_path_matches_direct_quadrature() {
        for d in families() {
            for k in 0..20 {
                let s = 10f64.powf(-3.0 + 0.3 * k as f64);
                let lap = PI * laplace_eval(&d, 1.0 / (4.0 * s)).unwrap();
                let quad = HeatMassCurve::with_mode(&d, o(), EvalMode::Quadrature).unwrap().eval(s).unwrap();
                assert_relative_eq!(lap, quad, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn laplace_small_v_is_mass_over_pi() {
        for d in families() {
            assert_relative_eq!(laplace_eval(&d, 1e-10).unwrap(), d.mass() / PI, max_relative = 1e-8);
        }
    }

    #[test]
    fn annulus_laplace_formula() {
        let a = InitialDatum::annulus(3.0, 1.0, 2.0, o()).unwrap();
        let v = 0.37;
        assert_relative_eq!(laplace_eval(&a, v).unwrap(), 3.0 * ((-v).exp() - (-4.0 * v).exp()) / v, max_relative = 1e-14);
    }

    #[test]
    fn grid_is_not_radial() {
        let g = CartesianGrid::new(1, 1, 1.0, o(), vec![1.0]).unwrap();
        let d = InitialDatum::grid(g, o()).unwrap();
        assert_eq!(laplace_eval(&d, 1.0), Err(Error::NotRadial));
    }

    #[test]
    fn strictly_increasing_and_in_range_off_center() {
        for d in families() {
            for z in [o(), Point::new(0.8, -0.3)] {
                let c = HeatMassCurve::new(&d, z);
                let mut prev = 0.0;
                for k in 0..50 {
                    let s = 10f64.powf(-3.0 + 6.0 * k as f64 / 49.0);
                    let h = c.eval(s).unwrap();
                    assert!(h > prev && h < d.mass(), "{} z={:?} s={} h={}", d.family_name(), z, s, h);
                    prev = h;
                }
            }
        }
    }

    #[test]
    fn inversion_examples() {
        let cfg = InversionConfig::default();
        let g = InitialDatum::gaussian(16.0 * PI, 1.0, o()).unwrap();
        assert_relative_eq!(invert_heat_mass(&g, o(), 12.8 * PI, &cfg).unwrap(), 4.0, max_relative = 1e-9);
        let d = InitialDatum::disk(16.0, 1.0, o()).unwrap();
        let s = invert_heat_mass(&d, o(), d.mass() * 2.0 / 3.0, &cfg).unwrap();
        assert_relative_eq!(s, 0.285_97, max_relative = 1e-4);
        assert!(matches!(invert_heat_mass(&d, o(), d.mass(), &cfg), Err(Error::TargetOutOfRange { .. })));
    }

    #[test]
    fn inversion_round_trip() {
        let cfg = InversionConfig::default();
        for d in families() {
            for z in [o(), Point::new(0.5, 0.5)] {
                let c = HeatMassCurve::new(&d, z);
                for &s0 in &[0.01, 0.3, 2.0, 50.0] {
                    let target = c.eval(s0).unwrap();
                    let s = c.invert(target, &cfg).unwrap();
                    assert!((c.eval(s).unwrap() - target).abs() <= cfg.rel_tol * target);
                    assert_relative_eq!(s, s0, max_relative = 1e-6);
                }
            }
        }
    }

    #[test]
    fn single_precision_inversion() {
        let g = InitialDatum::<f32>::gaussian(16.0 * std::f32::consts::PI, 1.0, Point::origin()).unwrap();
        let s = invert_heat_mass(&g, Point::origin(), 12.8 * std::f32::consts::PI, &InversionConfig::default()).unwrap();
        assert_relative_eq!(s, 4.0, max_relative = 1e-4);
    }
}
