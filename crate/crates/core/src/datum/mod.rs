//! Initial data `n₀` and their scalar descriptors: mass, barycenter,
//! β-variance, Lᵖ norms, cumulative radial mass, its generalized inverse,
//! and support geometry.

mod grid;
mod profile;

pub use grid::CartesianGrid;
pub use profile::RadialProfile;

use crate::error::{Error, Result};
use crate::geometry::{convex_hull, diameter, enclosing_circle, Point};
use crate::numeric::quadrature::{integrate, QuadConfig};
use crate::numeric::roots::bisect_predicate;
use crate::numeric::special::{gamma, ln_gamma, lower_gamma_regularized_int, upper_gamma_regularized_int};
use crate::scalar::Scalar;

/// Family and parameters of a datum. Radial families are expressed about the
/// datum center; grid coordinates are offsets from it.
#[derive(Debug, Clone, PartialEq)]
pub enum DatumKind<S> {
    /// `M p_σ(x - z₀)` with `p_σ` the heat kernel at time `σ`.
    Gaussian { mass: S, sigma: S },
    /// `σ 1_{B(z₀, R)}`.
    DiskIndicator { height: S, radius: S },
    /// `σ (1_{B(z₀,R₂)} - 1_{B(z₀,R₁)})`.
    Annulus { height: S, r1: S, r2: S },
    /// `σ |x - z₀|^{2n} e^{-α |x - z₀|²}`.
    PolyGaussian { height: S, n: u32, alpha: S },
    /// `σ/(b-d) (e^{-d |x - z₀|²} - e^{-b |x - z₀|²})`.
    DiffGaussians { height: S, d: S, b: S },
    RadialProfile(RadialProfile<S>),
    CartesianGrid(CartesianGrid<S>),
}

/// Smallest enclosing disk radius `R₀`, support diameter `D`, and the
/// center of the enclosing disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportGeometry<S> {
    pub r0: S,
    pub diameter: S,
    pub center: Point<S>,
}

/// A non-negative planar density with cached mass.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialDatum<S> {
    kind: DatumKind<S>,
    center: Point<S>,
    mass: S,
}

fn positive<S: Scalar>(name: &'static str, v: S) -> Result<()> {
    if v > S::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {}", v)))
    }
}

fn finite_point<S: Scalar>(p: Point<S>) -> Result<()> {
    if p.x.is_finite() && p.y.is_finite() {
        Ok(())
    } else {
        Err(Error::param("center", "must be finite"))
    }
}

// Relative tail mass beyond which radial integrals are truncated.
const TAIL_REL: f64 = 1e-16;

impl<S: Scalar> InitialDatum<S> {
    pub fn gaussian(mass: S, sigma: S, center: Point<S>) -> Result<Self> {
        positive("mass", mass)?;
        positive("sigma", sigma)?;
        Self::build(DatumKind::Gaussian { mass, sigma }, center)
    }

    pub fn disk(height: S, radius: S, center: Point<S>) -> Result<Self> {
        positive("height", height)?;
        positive("radius", radius)?;
        Self::build(DatumKind::DiskIndicator { height, radius }, center)
    }

    pub fn annulus(height: S, r1: S, r2: S, center: Point<S>) -> Result<Self> {
        positive("height", height)?;
        positive("r1", r1)?;
        positive("r2", r2)?;
        if !(r1 < r2) {
            return Err(Error::param("r1", "annulus needs r1 < r2"));
        }
        Self::build(DatumKind::Annulus { height, r1, r2 }, center)
    }

    pub fn poly_gaussian(height: S, n: u32, alpha: S, center: Point<S>) -> Result<Self> {
        positive("height", height)?;
        positive("alpha", alpha)?;
        if n > 100 {
            return Err(Error::param("n", "polynomial degree above 100 is not supported"));
        }
        Self::build(DatumKind::PolyGaussian { height, n, alpha }, center)
    }

    pub fn diff_gaussians(height: S, d: S, b: S, center: Point<S>) -> Result<Self> {
        positive("height", height)?;
        if !(d > S::zero() && d < b && b.is_finite()) {
            return Err(Error::InvalidRates { d: d.as_f64(), b: b.as_f64() });
        }
        Self::build(DatumKind::DiffGaussians { height, d, b }, center)
    }

    pub fn radial_profile(profile: RadialProfile<S>, center: Point<S>) -> Result<Self> {
        Self::build(DatumKind::RadialProfile(profile), center)
    }

    pub fn grid(grid: CartesianGrid<S>, center: Point<S>) -> Result<Self> {
        Self::build(DatumKind::CartesianGrid(grid), center)
    }

    pub fn from_kind(kind: DatumKind<S>, center: Point<S>) -> Result<Self> {
        match kind {
            DatumKind::Gaussian { mass, sigma } => Self::gaussian(mass, sigma, center),
            DatumKind::DiskIndicator { height, radius } => Self::disk(height, radius, center),
            DatumKind::Annulus { height, r1, r2 } => Self::annulus(height, r1, r2, center),
            DatumKind::PolyGaussian { height, n, alpha } => Self::poly_gaussian(height, n, alpha, center),
            DatumKind::DiffGaussians { height, d, b } => Self::diff_gaussians(height, d, b, center),
            k => Self::build(k, center),
        }
    }

    fn build(kind: DatumKind<S>, center: Point<S>) -> Result<Self> {
        finite_point(center)?;
        let pi = S::PI();
        let mass = match &kind {
            DatumKind::Gaussian { mass, .. } => *mass,
            DatumKind::DiskIndicator { height, radius } => *height * pi * *radius * *radius,
            DatumKind::Annulus { height, r1, r2 } => *height * pi * (*r2 * *r2 - *r1 * *r1),
            DatumKind::PolyGaussian { height, n, alpha } => {
                (height.ln() + pi.ln() + ln_gamma(S::lit(f64::from(*n) + 1.0)) - S::lit(f64::from(*n) + 1.0) * alpha.ln()).exp()
            }
            DatumKind::DiffGaussians { height, d, b } => *height * pi / (*d * *b),
            DatumKind::RadialProfile(p) => S::lit(2.0) * pi * p.first_moment_upto(S::infinity()),
            DatumKind::CartesianGrid(g) => g.values().iter().copied().sum::<S>() * g.cell_area(),
        };
        if mass == S::zero() {
            return Err(Error::ZeroDatum);
        }
        if !(mass > S::zero()) || !mass.is_finite() {
            return Err(Error::param("mass", format!("computed mass {} is not finite and positive", mass)));
        }
        Ok(Self { kind, center, mass })
    }

    pub fn kind(&self) -> &DatumKind<S> {
        &self.kind
    }

    pub fn center(&self) -> Point<S> {
        self.center
    }

    /// `M = ∫ n₀`, computed once at construction.
    pub fn mass(&self) -> S {
        self.mass
    }

    pub fn family_name(&self) -> &'static str {
        match self.kind {
            DatumKind::Gaussian { .. } => "gaussian",
            DatumKind::DiskIndicator { .. } => "disk",
            DatumKind::Annulus { .. } => "annulus",
            DatumKind::PolyGaussian { .. } => "poly_gaussian",
            DatumKind::DiffGaussians { .. } => "diff_gaussians",
            DatumKind::RadialProfile(_) => "radial_profile",
            DatumKind::CartesianGrid(_) => "grid",
        }
    }

    /// The same density moved by `shift`.
    pub fn translated(&self, shift: Point<S>) -> Self {
        Self { kind: self.kind.clone(), center: self.center.add(&shift), mass: self.mass }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self.kind, DatumKind::CartesianGrid(_))
    }

    pub fn is_compact(&self) -> bool {
        !matches!(
            self.kind,
            DatumKind::Gaussian { .. } | DatumKind::PolyGaussian { .. } | DatumKind::DiffGaussians { .. }
        )
    }

    /// Radially symmetric about the center and non-increasing in `|x - z₀|`.
    pub fn is_nonincreasing_radial(&self) -> bool {
        match &self.kind {
            DatumKind::Gaussian { .. } | DatumKind::DiskIndicator { .. } => true,
            DatumKind::PolyGaussian { n, .. } => *n == 0,
            DatumKind::RadialProfile(p) => p.is_nonincreasing_from_origin(),
            _ => false,
        }
    }

    pub(crate) fn as_grid(&self) -> Option<&CartesianGrid<S>> {
        match &self.kind {
            DatumKind::CartesianGrid(g) => Some(g),
            _ => None,
        }
    }

    /// Radial profile `ñ(r)` of a radial datum.
    pub fn profile(&self, r: S) -> Result<S> {
        if self.is_radial() {
            Ok(self.radial_value(r))
        } else {
            Err(Error::NotRadial)
        }
    }

    pub(crate) fn radial_value(&self, r: S) -> S {
        let r2 = r * r;
        match &self.kind {
            DatumKind::Gaussian { mass, sigma } => {
                *mass / (S::lit(4.0) * S::PI() * *sigma) * (-r2 / (S::lit(4.0) * *sigma)).exp()
            }
            DatumKind::DiskIndicator { height, radius } => {
                if r <= *radius {
                    *height
                } else {
                    S::zero()
                }
            }
            DatumKind::Annulus { height, r1, r2: outer } => {
                if r >= *r1 && r <= *outer {
                    *height
                } else {
                    S::zero()
                }
            }
            DatumKind::PolyGaussian { height, n, alpha } => *height * r2.powi(*n as i32) * (-*alpha * r2).exp(),
            DatumKind::DiffGaussians { height, d, b } => {
                *height / (*b - *d) * (-*d * r2).exp() * (-(-(*b - *d) * r2).exp_m1())
            }
            DatumKind::RadialProfile(p) => p.eval(r),
            DatumKind::CartesianGrid(_) => S::zero(),
        }
    }

    /// Pointwise density value. Grid data return the value of the cell
    /// containing `x` (zero outside the grid).
    pub fn density(&self, x: Point<S>) -> S {
        let rel = x.sub(&self.center);
        match &self.kind {
            DatumKind::CartesianGrid(g) => {
                let h = g.cell_size();
                let fj = ((rel.x - g.origin().x) / h).floor();
                let fi = ((rel.y - g.origin().y) / h).floor();
                if fi < S::zero() || fj < S::zero() {
                    return S::zero();
                }
                let (i, j) = (fi.as_f64() as usize, fj.as_f64() as usize);
                if i >= g.rows() || j >= g.cols() {
                    return S::zero();
                }
                g.values()[i * g.cols() + j]
            }
            _ => self.radial_value(rel.norm()),
        }
    }

    /// A radius that contains the bulk of the mass; used for step sizes and
    /// initial brackets.
    pub fn length_scale(&self) -> S {
        match &self.kind {
            DatumKind::Gaussian { sigma, .. } => S::lit(2.0) * sigma.sqrt(),
            DatumKind::DiskIndicator { radius, .. } => *radius,
            DatumKind::Annulus { r2, .. } => *r2,
            DatumKind::PolyGaussian { n, alpha, .. } => (S::lit(f64::from(*n) + 1.0) / *alpha).sqrt(),
            DatumKind::DiffGaussians { d, .. } => S::one() / d.sqrt(),
            DatumKind::RadialProfile(p) => p.outer_radius(),
            DatumKind::CartesianGrid(g) => {
                let b = self.barycenter();
                let far = g
                    .nonzero_cells()
                    .map(|(p, _)| p.add(&self.center).dist(&b))
                    .fold(S::zero(), S::max);
                far.max(g.cell_size())
            }
        }
    }

    /// Outer radius of a compactly supported radial datum.
    fn outer_radius(&self) -> Option<S> {
        match &self.kind {
            DatumKind::DiskIndicator { radius, .. } => Some(*radius),
            DatumKind::Annulus { r2, .. } => Some(*r2),
            DatumKind::RadialProfile(p) => Some(p.outer_radius()),
            _ => None,
        }
    }

    /// Largest radius below which the radial profile vanishes.
    pub(crate) fn inner_radius(&self) -> S {
        match &self.kind {
            DatumKind::Annulus { r1, .. } => *r1,
            DatumKind::RadialProfile(p) => {
                let (k, v) = (p.knots(), p.values());
                (0..k.len())
                    .find(|&i| v[i] > S::zero() || v.get(i + 1).is_some_and(|x| *x > S::zero()))
                    .map(|i| k[i])
                    .unwrap_or(S::zero())
            }
            _ => S::zero(),
        }
    }

    /// Radius beyond which the mass fraction is below `rel`.
    pub(crate) fn tail_radius(&self, rel: S) -> S {
        if let Some(r) = self.outer_radius() {
            return r;
        }
        let four = S::lit(4.0);
        match &self.kind {
            DatumKind::Gaussian { sigma, .. } => (four * *sigma * (-rel.ln())).sqrt(),
            DatumKind::DiffGaussians { d, b, .. } => ((*b / ((*b - *d) * rel)).ln() / *d).sqrt(),
            DatumKind::PolyGaussian { n, alpha, .. } => {
                let mut hi = S::lit(f64::from(*n) + 1.0);
                while upper_gamma_regularized_int(*n, hi) > rel {
                    hi = hi * S::lit(2.0);
                }
                let x = bisect_predicate(|x| upper_gamma_regularized_int(*n, x) <= rel, S::zero(), hi, S::lit(1e-6), 100);
                (x / *alpha).sqrt()
            }
            _ => self.length_scale(),
        }
    }

    fn radial_breaks(&self) -> Vec<S> {
        let l = |x: f64| S::lit(x);
        match &self.kind {
            DatumKind::Gaussian { sigma, .. } => {
                let s = sigma.sqrt();
                vec![s, s * l(2.0), s * l(4.0), s * l(8.0)]
            }
            DatumKind::DiskIndicator { radius, .. } => vec![*radius],
            DatumKind::Annulus { r1, r2, .. } => vec![*r1, *r2],
            DatumKind::PolyGaussian { n, alpha, .. } => {
                let s = S::one() / alpha.sqrt();
                let peak = (S::lit(f64::from(*n)) / *alpha).sqrt();
                let mut v = vec![peak, peak + s, peak + s * l(2.0), peak + s * l(4.0), peak + s * l(8.0), s];
                if peak > s {
                    v.push(peak - s);
                }
                v
            }
            DatumKind::DiffGaussians { d, b, .. } => {
                let sb = S::one() / b.sqrt();
                let sd = S::one() / d.sqrt();
                vec![sb, sd, sd * l(2.0), sd * l(4.0), sd * l(8.0)]
            }
            DatumKind::RadialProfile(p) => p.knots().to_vec(),
            DatumKind::CartesianGrid(_) => Vec::new(),
        }
    }

    /// `∫_{lo}^{hi} ñ(r) f(r) dr` with the family breakpoints and `extra`
    /// used as panel boundaries.
    pub(crate) fn radial_quad<F: Fn(S) -> S>(&self, f: F, lo: S, hi: S, extra: &[S]) -> S {
        if !(hi > lo) {
            return S::zero();
        }
        let mut knots = vec![lo, hi];
        knots.extend(self.radial_breaks().into_iter().chain(extra.iter().copied()).filter(|x| *x > lo && *x < hi));
        integrate(|r| self.radial_value(r) * f(r), &knots, &QuadConfig::default()).value
    }

    /// `∫_0^∞ ñ(r) f(r) dr` for weights that may grow. The range is extended
    /// by doubling until a new panel adds less than `1e-12` of the total.
    pub(crate) fn radial_quad_to_infinity<F: Fn(S) -> S>(&self, f: F) -> Option<S> {
        if let Some(r) = self.outer_radius() {
            return Some(self.radial_quad(&f, S::zero(), r, &[]));
        }
        let mut hi = self.tail_radius(S::lit(TAIL_REL).max(S::epsilon()));
        let mut total = self.radial_quad(&f, S::zero(), hi, &[]);
        for _ in 0..40 {
            let next = hi * S::lit(2.0);
            let add = self.radial_quad(&f, hi, next, &[]);
            total = total + add;
            hi = next;
            if !total.is_finite() {
                return None;
            }
            if add.abs() <= S::lit(1e-12) * total.abs() {
                return Some(total);
            }
        }
        None
    }

    /// `B₀ = (1/M) ∫ x n₀(x) dx`.
    pub fn barycenter(&self) -> Point<S> {
        match &self.kind {
            DatumKind::CartesianGrid(g) => {
                let (mut sx, mut sy, mut sw) = (S::zero(), S::zero(), S::zero());
                for (p, v) in g.nonzero_cells() {
                    sx = sx + p.x * v;
                    sy = sy + p.y * v;
                    sw = sw + v;
                }
                Point::new(self.center.x + sx / sw, self.center.y + sy / sw)
            }
            _ => self.center,
        }
    }

    /// Start points for searches over the plane: the center, the barycenter
    /// and, for grids, the coordinate-wise mass-weighted median.
    pub fn search_seeds(&self) -> Vec<Point<S>> {
        let mut seeds = vec![self.center, self.barycenter()];
        if let Some(g) = self.as_grid() {
            let xs = g.nonzero_cells().map(|(p, v)| (p.x, v)).collect();
            let ys = g.nonzero_cells().map(|(p, v)| (p.y, v)).collect();
            let med = Point::new(grid::weighted_median(xs), grid::weighted_median(ys)).add(&self.center);
            seeds.push(med);
        }
        seeds.dedup();
        seeds
    }

    /// `(1/M) ∫ |x - z|^β n₀(x) dx`.
    pub fn moment_about(&self, z: Point<S>, beta: S) -> Result<S> {
        if !(beta > S::zero()) || !beta.is_finite() {
            return Err(Error::MomentDivergence { beta: beta.as_f64() });
        }
        let m = self.mass;
        if let Some(g) = self.as_grid() {
            let rel = z.sub(&self.center);
            let half_beta = beta * S::lit(0.5);
            let s: S = g.nonzero_cells().map(|(p, v)| v * p.dist2(&rel).powf(half_beta)).sum();
            return Ok(s * g.cell_area() / m);
        }
        let w = z.dist(&self.center);
        if w == S::zero() {
            return self.central_moment(beta);
        }
        if beta == S::lit(2.0) {
            return Ok(self.central_moment(beta)? + w * w);
        }
        let half_beta = beta * S::lit(0.5);
        let two = S::lit(2.0);
        let inner = |r: S| -> S {
            let f = |phi: S| (r * r + w * w - two * r * w * phi.cos()).max(S::zero()).powf(half_beta);
            two * integrate(f, &[S::zero(), S::PI()], &QuadConfig::default()).value
        };
        self.radial_quad_to_infinity(|r| r * inner(r))
            .filter(|v| v.is_finite())
            .map(|v| v / m)
            .ok_or(Error::MomentDivergence { beta: beta.as_f64() })
    }

    /// `(1/M) ∫ |x - z₀|^β n₀` for radial data.
    fn central_moment(&self, beta: S) -> Result<S> {
        let one = S::one();
        let two = S::lit(2.0);
        let hb = beta / two;
        let v = match &self.kind {
            DatumKind::Gaussian { sigma, .. } => (S::lit(4.0) * *sigma).powf(hb) * gamma(one + hb),
            DatumKind::DiskIndicator { radius, .. } => two / (beta + two) * radius.powf(beta),
            DatumKind::Annulus { r1, r2, .. } => {
                two * (r2.powf(beta + two) - r1.powf(beta + two)) / ((beta + two) * (*r2 * *r2 - *r1 * *r1))
            }
            DatumKind::PolyGaussian { n, alpha, .. } => {
                let np1 = S::lit(f64::from(*n) + 1.0);
                (ln_gamma(np1 + hb) - ln_gamma(np1) - hb * alpha.ln()).exp()
            }
            DatumKind::DiffGaussians { d, b, .. } => {
                *d * *b / (*b - *d) * gamma(one + hb) * (d.powf(-one - hb) - b.powf(-one - hb))
            }
            DatumKind::RadialProfile(_) => {
                let m = self.mass;
                let s = self
                    .radial_quad_to_infinity(|r| r.powf(beta + one))
                    .ok_or(Error::MomentDivergence { beta: beta.as_f64() })?;
                two * S::PI() * s / m
            }
            DatumKind::CartesianGrid(_) => return self.moment_about(self.center, beta),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::MomentDivergence { beta: beta.as_f64() })
        }
    }

    /// `V_β = [(1/M) ∫ |x - B₀|^β n₀]^{2/β}`.
    pub fn beta_variance(&self, beta: S) -> Result<S> {
        if !(beta >= S::one()) {
            return Err(Error::param("beta", format!("must be >= 1, got {}", beta)));
        }
        let m = self.moment_about(self.barycenter(), beta)?;
        Ok(m.powf(S::lit(2.0) / beta))
    }

    /// `‖n₀‖_p` for `p ∈ [1, ∞]`.
    pub fn lp_norm(&self, p: S) -> Result<S> {
        if !(p >= S::one()) {
            return Err(Error::param("p", format!("must be >= 1, got {}", p)));
        }
        if p == S::one() {
            return Ok(self.mass);
        }
        let inf = p.is_infinite();
        let pi = S::PI();
        let one = S::one();
        let v = match &self.kind {
            DatumKind::Gaussian { mass, sigma } => {
                let k = S::lit(4.0) * pi * *sigma;
                if inf {
                    *mass / k
                } else {
                    *mass * k.powf(-one + one / p) * p.powf(-one / p)
                }
            }
            DatumKind::DiskIndicator { height, radius } => {
                if inf {
                    *height
                } else {
                    *height * (pi * *radius * *radius).powf(one / p)
                }
            }
            DatumKind::Annulus { height, r1, r2 } => {
                if inf {
                    *height
                } else {
                    *height * (pi * (*r2 * *r2 - *r1 * *r1)).powf(one / p)
                }
            }
            DatumKind::PolyGaussian { height, n, alpha } => {
                let nn = S::lit(f64::from(*n));
                if inf {
                    if *n == 0 {
                        *height
                    } else {
                        *height * (nn / *alpha).powf(nn) * (-nn).exp()
                    }
                } else {
                    let ln_pp = p * height.ln() + pi.ln() + ln_gamma(nn * p + one) - (nn * p + one) * (*alpha * p).ln();
                    (ln_pp / p).exp()
                }
            }
            DatumKind::DiffGaussians { d, b, .. } => {
                if inf {
                    let u = (*b / *d).ln() / (*b - *d);
                    self.radial_value(u.sqrt())
                } else {
                    self.numeric_lp(p)?
                }
            }
            DatumKind::RadialProfile(prof) => {
                if inf {
                    prof.values().iter().copied().fold(S::zero(), S::max)
                } else {
                    self.numeric_lp(p)?
                }
            }
            DatumKind::CartesianGrid(g) => {
                if inf {
                    g.max_value()
                } else {
                    let s: S = g.nonzero_cells().map(|(_, v)| v.powf(p)).sum();
                    (s * g.cell_area()).powf(one / p)
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NormDivergence { p: p.as_f64() })
        }
    }

    fn numeric_lp(&self, p: S) -> Result<S> {
        let pm1 = p - S::one();
        let s = self
            .radial_quad_to_infinity(|r| self.radial_value(r).powf(pm1) * r)
            .ok_or(Error::NormDivergence { p: p.as_f64() })?;
        Ok((S::lit(2.0) * S::PI() * s).powf(S::one() / p))
    }

    /// `M_z(ρ) = ∫_{B(z,ρ)} n₀`.
    pub fn radial_mass(&self, z: Point<S>, rho: S) -> Result<S> {
        if !(rho >= S::zero()) {
            return Err(Error::param("rho", format!("must be non-negative, got {}", rho)));
        }
        if rho == S::zero() {
            return Ok(S::zero());
        }
        if rho.is_infinite() {
            return Ok(self.mass);
        }
        if let Some(g) = self.as_grid() {
            let rel = z.sub(&self.center);
            // Same distance expression as the grid inverse, so g(g^←(m)) >= m holds exactly.
            let s: S = g.nonzero_cells().filter(|(p, _)| p.dist(&rel) <= rho).map(|(_, v)| v).sum();
            return Ok(s * g.cell_area());
        }
        let w = z.dist(&self.center);
        if w <= S::epsilon() * self.length_scale() {
            return Ok(self.radial_mass_centered(rho));
        }
        let two = S::lit(2.0);
        let two_pi = two * S::PI();
        let (inner, lo) = if rho > w { (self.radial_mass_centered(rho - w), rho - w) } else { (S::zero(), w - rho) };
        let hi = (w + rho).min(self.tail_radius(S::lit(TAIL_REL).max(S::epsilon())));
        let arc = |r: S| -> S {
            if r <= S::zero() {
                return if rho > w { two_pi } else { S::zero() };
            }
            let c = ((r * r + w * w - rho * rho) / (two * r * w)).max(-S::one()).min(S::one());
            two * c.acos()
        };
        if !(hi > lo) {
            return Ok(inner.min(self.mass));
        }
        // r = mid - half cos θ absorbs the square-root behavior of the arc
        // length at both ends of [|w - ρ|, w + ρ].
        let mid = (lo + hi) / two;
        let half = (hi - lo) / two;
        let mut knots = vec![S::zero(), S::PI()];
        knots.extend(
            self.radial_breaks()
                .into_iter()
                .filter(|b| *b > lo && *b < hi)
                .map(|b| ((mid - b) / half).max(-S::one()).min(S::one()).acos()),
        );
        let ring = integrate(
            |t: S| {
                let r = mid - half * t.cos();
                self.radial_value(r) * r * arc(r) * half * t.sin()
            },
            &knots,
            // A thin ring near w = 0 only needs accuracy relative to M.
            &QuadConfig::default().with_abs_tol(S::quad_tol() * self.mass),
        )
        .value;
        Ok((inner + ring).min(self.mass))
    }

    fn radial_mass_centered(&self, rho: S) -> S {
        let one = S::one();
        let pi = S::PI();
        let r2 = rho * rho;
        let m = self.mass;
        match &self.kind {
            DatumKind::Gaussian { sigma, .. } => -m * (-r2 / (S::lit(4.0) * *sigma)).exp_m1(),
            DatumKind::DiskIndicator { radius, .. } => {
                let t = (rho / *radius).min(one);
                m * t * t
            }
            DatumKind::Annulus { height, r1, r2: outer } => {
                let c = rho.max(*r1).min(*outer);
                *height * pi * (c * c - *r1 * *r1)
            }
            DatumKind::PolyGaussian { n, alpha, .. } => m * lower_gamma_regularized_int(*n, *alpha * r2),
            DatumKind::DiffGaussians { height, d, b } => {
                let ed = -(-*d * r2).exp_m1() / *d;
                let eb = -(-*b * r2).exp_m1() / *b;
                *height * pi / (*b - *d) * (ed - eb)
            }
            DatumKind::RadialProfile(p) => S::lit(2.0) * pi * p.first_moment_upto(rho),
            DatumKind::CartesianGrid(_) => self.radial_mass(self.center, rho).unwrap_or(S::zero()),
        }
    }

    /// `g_z(ρ) = M_z(ρ) / M`.
    pub fn mass_fraction(&self, z: Point<S>, rho: S) -> Result<S> {
        Ok(self.radial_mass(z, rho)? / self.mass)
    }

    /// `g_z^←(m) = inf{ρ > 0 : g_z(ρ) ≥ m}`.
    ///
    /// `m = 1` is accepted for compactly supported data only.
    pub fn generalized_inverse(&self, z: Point<S>, m: S) -> Result<S> {
        let one = S::one();
        if !(m > S::zero() && m <= one) {
            return Err(Error::param("m", format!("must lie in (0, 1], got {}", m)));
        }
        if let Some(g) = self.as_grid() {
            return Ok(self.grid_inverse(g, z, m));
        }
        let w = z.dist(&self.center);
        if m == one {
            return match self.outer_radius() {
                Some(r) => Ok(r + w),
                None => Err(Error::Unbounded),
            };
        }
        if w == S::zero() {
            match &self.kind {
                DatumKind::Gaussian { sigma, .. } => {
                    return Ok((-S::lit(4.0) * *sigma * (-m).ln_1p()).sqrt());
                }
                DatumKind::DiskIndicator { radius, .. } => return Ok(*radius * m.sqrt()),
                DatumKind::Annulus { r1, r2, .. } => {
                    return Ok((*r1 * *r1 + m * (*r2 * *r2 - *r1 * *r1)).sqrt());
                }
                _ => {}
            }
        }
        let target = m * self.mass;
        let mass_at = |rho: S| self.radial_mass(z, rho).unwrap_or(S::zero());
        let mut hi = match self.outer_radius() {
            Some(r) => r + w,
            None => w + self.length_scale(),
        };
        let mut grown = 0;
        while mass_at(hi) < target {
            hi = hi * S::lit(2.0);
            grown += 1;
            if grown > 200 || !hi.is_finite() {
                return Err(Error::Unbounded);
            }
        }
        Ok(bisect_predicate(|rho| mass_at(rho) >= target, S::zero(), hi, S::epsilon() * S::lit(4.0), 400))
    }

    fn grid_inverse(&self, g: &CartesianGrid<S>, z: Point<S>, m: S) -> S {
        let rel = z.sub(&self.center);
        let mut cells: Vec<(S, S)> = g.nonzero_cells().map(|(p, v)| (p.dist(&rel), v)).collect();
        cells.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let target = m * self.mass;
        let area = g.cell_area();
        let mut acc = S::zero();
        for (d, v) in &cells {
            acc = acc + *v * area;
            // Relative slack absorbs summation-order rounding at m = 1.
            if acc >= target * (S::one() - S::epsilon() * S::lit(16.0)) {
                return *d;
            }
        }
        cells.last().map(|c| c.0).unwrap_or(S::zero())
    }

    /// `R₀`, `D` and the enclosing-disk center of a compact support.
    pub fn support_geometry(&self) -> Result<SupportGeometry<S>> {
        if let Some(g) = self.as_grid() {
            let corners = g.active_corners();
            let hull = convex_hull(&corners);
            let circle = enclosing_circle(&hull).ok_or(Error::ZeroDatum)?;
            return Ok(SupportGeometry {
                r0: circle.radius,
                diameter: diameter(&hull),
                center: circle.center.add(&self.center),
            });
        }
        match self.outer_radius() {
            Some(r) => Ok(SupportGeometry { r0: r, diameter: S::lit(2.0) * r, center: self.center }),
            None => Err(Error::UnboundedSupport),
        }
    }

    /// `∫ w(|x - z|²) n₀(x) dx` for a weight with `0 <= w <= 1`.
    pub fn weighted_mass<W: Fn(S) -> S>(&self, z: Point<S>, weight: W) -> S {
        if let Some(g) = self.as_grid() {
            let rel = z.sub(&self.center);
            let s: S = g.nonzero_cells().map(|(p, v)| v * weight(p.dist2(&rel))).sum();
            return s * g.cell_area();
        }
        let two = S::lit(2.0);
        let hi = self.tail_radius(S::lit(TAIL_REL).max(S::epsilon()));
        let w = z.dist(&self.center);
        if w <= S::epsilon() * self.length_scale() {
            return two * S::PI() * self.radial_quad(|r| r * weight(r * r), S::zero(), hi, &[]);
        }
        let inner = |r: S| -> S {
            let f = |phi: S| weight((r * r + w * w - two * r * w * phi.cos()).max(S::zero()));
            two * integrate(f, &[S::zero(), S::PI() * S::lit(0.25), S::PI()], &QuadConfig::default()).value
        };
        self.radial_quad(|r| r * inner(r), S::zero(), hi, &[w])
    }
}
