use crate::datum::InitialDatum;
use crate::geometry::Point;
use crate::heatmass::InversionConfig;
use crate::numeric::optimize::{compass_search, grid_then_golden};
use crate::scalar::Scalar;

/// Knobs shared by the estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundConfig<S> {
    pub inversion: InversionConfig<S>,
    /// Evaluate `H` by quadrature even where a closed form exists.
    pub force_quadrature: bool,
    /// For radial data, search centers along one ray from `z₀` instead of
    /// over the plane.
    pub assume_symmetry: bool,
    /// Relative bracket width at which golden-section refinements stop.
    pub search_tol: S,
    /// Evaluation budget of each compass search over the plane.
    pub max_search_evals: usize,
    /// Moment order of the extra `tc4_beta` row (skipped when `<= 2`).
    pub beta: S,
    /// Exponent `p` of the lower bound; `∞` by default.
    pub lower_p: S,
    /// Relative slack of the report's ordering check.
    pub ordering_slack: S,
}

impl<S: Scalar> Default for BoundConfig<S> {
    fn default() -> Self {
        Self {
            inversion: InversionConfig::default(),
            force_quadrature: false,
            assume_symmetry: true,
            search_tol: S::lit(1e-7).max(S::epsilon() * S::lit(16.0)),
            max_search_evals: 4000,
            beta: S::lit(4.0),
            lower_p: S::infinity(),
            ordering_slack: S::lit(1e-6).max(S::epsilon() * S::lit(1024.0)),
        }
    }
}

/// Where an infimum over centers was found and how.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchCertificate<S> {
    pub z: Point<S>,
    pub value: S,
    pub trace: Vec<(Point<S>, S)>,
    pub evaluations: usize,
    pub method: SearchMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    /// `z = z₀`, justified by radial monotonicity.
    Fixed,
    /// Radial datum: search over `|z - z₀|` along a ray.
    Ray,
    /// Multi-start compass search over the plane.
    Compass,
}

impl<S: Scalar> SearchCertificate<S> {
    pub fn fixed(z: Point<S>, value: S) -> Self {
        Self { z, value, trace: vec![(z, value)], evaluations: 1, method: SearchMethod::Fixed }
    }

    pub fn summary(&self) -> String {
        format!(
            "z=({:.6}, {:.6}) via {:?}, {} evaluations, {} trace points",
            self.z.x.as_f64(),
            self.z.y.as_f64(),
            self.method,
            self.evaluations,
            self.trace.len()
        )
    }
}

fn finite_or_inf<S: Scalar>(v: S) -> S {
    if v.is_nan() {
        S::infinity()
    } else {
        v
    }
}

/// Minimizes `f` over centers `z`. Radial data under `assume_symmetry` are
/// searched along a ray out to the support scale; everything else uses a
/// compass search in coordinates relative to the datum center, seeded at the
/// center, barycenter and (for grids) the weighted median.
pub fn minimize_over_centers<S, F>(datum: &InitialDatum<S>, cfg: &BoundConfig<S>, f: F) -> SearchCertificate<S>
where
    S: Scalar,
    F: Fn(Point<S>) -> S,
{
    let c = datum.center();
    let scale = datum.length_scale();
    if datum.is_radial() && cfg.assume_symmetry {
        let at = |w: S| Point::new(c.x + w, c.y);
        let evals = std::cell::RefCell::new(Vec::new());
        let g = |w: S| {
            let v = finite_or_inf(f(at(w)));
            evals.borrow_mut().push((at(w), v));
            v
        };
        // Golden-section tolerance is absolute near w = 0, so search in units
        // of the scale.
        let best = grid_then_golden(|u| g(u * scale), S::zero(), S::one(), 17, cfg.search_tol);
        let trace = evals.into_inner();
        return SearchCertificate {
            z: at(best.x * scale),
            value: best.value,
            evaluations: trace.len(),
            trace,
            method: SearchMethod::Ray,
        };
    }
    let seeds: Vec<Point<S>> = datum.search_seeds().iter().map(|p| p.sub(&c)).collect();
    let s = compass_search(
        |p: Point<S>| finite_or_inf(f(p.add(&c))),
        &seeds,
        scale * S::lit(0.25),
        scale * S::lit(1e-4),
        cfg.max_search_evals,
    );
    SearchCertificate {
        z: s.point.add(&c),
        value: s.value,
        trace: s.trace.into_iter().map(|(p, v)| (p.add(&c), v)).collect(),
        evaluations: s.evaluations,
        method: SearchMethod::Compass,
    }
}
