//! Globally adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

use crate::scalar::Scalar;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<S> {
    pub value: S,
    pub error: S,
    pub converged: bool,
    pub evaluations: usize,
}

/// Tolerances and budget for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<S> {
    pub rel_tol: S,
    pub abs_tol: S,
    pub max_intervals: usize,
}

impl<S: Scalar> Default for QuadConfig<S> {
    fn default() -> Self {
        Self { rel_tol: S::quad_tol(), abs_tol: S::zero(), max_intervals: 4000 }
    }
}

impl<S: Scalar> QuadConfig<S> {
    pub fn with_abs_tol(mut self, abs_tol: S) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Clone, Copy)]
struct Panel<S> {
    a: S,
    b: S,
    value: S,
    error: S,
}

fn kronrod<S: Scalar, F: Fn(S) -> S>(f: &F, a: S, b: S) -> Panel<S> {
    let half = (b - a) * S::lit(0.5);
    let mid = (a + b) * S::lit(0.5);
    let fc = f(mid);
    let mut kron = fc * S::lit(WGK[7]);
    let mut gauss = fc * S::lit(WG[3]);
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = half * S::lit(x);
        let pair = f(mid - dx) + f(mid + dx);
        kron = kron + pair * S::lit(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + pair * S::lit(WG[j / 2]);
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).abs();
    Panel { a, b, value, error }
}

/// Integrates `f` over `[min(points), max(points)]`, using every entry of
/// `points` as an initial panel boundary.
pub fn integrate<S, F>(f: F, points: &[S], cfg: &QuadConfig<S>) -> QuadResult<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let mut knots: Vec<S> = points.iter().copied().filter(|x| x.is_finite()).collect();
    knots.sort_by(|x, y| x.partial_cmp(y).expect("finite knots"));
    knots.dedup();
    if knots.len() < 2 {
        return QuadResult { value: S::zero(), error: S::zero(), converged: true, evaluations: 0 };
    }

    let mut panels: Vec<Panel<S>> = knots.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    let mut evaluations = 15 * panels.len();

    loop {
        let total: S = panels.iter().map(|p| p.value).sum();
        let err: S = panels.iter().map(|p| p.error).sum();
        let goal = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= goal || !err.is_finite() {
            return QuadResult { value: total, error: err, converged: err.is_finite(), evaluations };
        }
        if panels.len() >= cfg.max_intervals {
            return QuadResult { value: total, error: err, converged: false, evaluations };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, S::neg_infinity()), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels.swap_remove(worst);
        let mid = (p.a + p.b) * S::lit(0.5);
        if mid <= p.a || mid >= p.b {
            // Panel no longer splittable at this precision.
            let total: S = panels.iter().map(|q| q.value).sum::<S>() + p.value;
            return QuadResult { value: total, error: err, converged: false, evaluations };
        }
        panels.push(kronrod(&f, p.a, mid));
        panels.push(kronrod(&f, mid, p.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, &[0.0, 2.0], &QuadConfig::default());
        assert_relative_eq!(r.value, 64.0 / 6.0 - 8.0, max_relative = 1e-14);
    }

    #[test]
    fn gaussian_with_breakpoints() {
        let sigma = 1e-3_f64;
        let f = |x: f64| (-(x - 0.3).powi(2) / (2.0 * sigma * sigma)).exp();
        let exact = sigma * (2.0 * std::f64::consts::PI).sqrt();
        let r = integrate(f, &[-5.0, 0.3 - 10.0 * sigma, 0.3, 0.3 + 10.0 * sigma, 5.0], &QuadConfig::default());
        assert!(r.converged);
        assert_relative_eq!(r.value, exact, max_relative = 1e-11);
    }

    #[test]
    fn sqrt_endpoint_singularity_converges() {
        let r = integrate(|x: f64| x.sqrt(), &[0.0, 1.0], &QuadConfig::default());
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-10);
    }

    #[test]
    fn works_in_single_precision() {
        let r = integrate(|x: f32| x.exp(), &[0.0, 1.0], &QuadConfig::default());
        assert_relative_eq!(r.value, std::f32::consts::E - 1.0, max_relative = 1e-5);
    }

    #[test]
    fn degenerate_range_is_zero() {
        let r = integrate(|x: f64| x, &[1.0, 1.0], &QuadConfig::default());
        assert_eq!(r.value, 0.0);
    }
}
