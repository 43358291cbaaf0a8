use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tabulated radial profile `ñ(r)`, piecewise linear in `r` between
/// strictly increasing knots and zero outside `[knots[0], knots[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<S> {
    knots: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> RadialProfile<S> {
    pub fn new(knots: Vec<S>, values: Vec<S>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::param("knots", "need at least two knots and one value per knot"));
        }
        if !(knots[0] >= S::zero()) {
            return Err(Error::param("knots", "radii must be non-negative"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
            return Err(Error::param("knots", "radii must be finite and strictly increasing"));
        }
        if values.iter().any(|v| !(*v >= S::zero()) || !v.is_finite()) {
            return Err(Error::param("values", "must be finite and non-negative"));
        }
        if values.iter().all(|v| *v == S::zero()) {
            return Err(Error::ZeroDatum);
        }
        Ok(Self { knots, values })
    }

    pub fn knots(&self) -> &[S] {
        &self.knots
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn eval(&self, r: S) -> S {
        let k = &self.knots;
        let last = k.len() - 1;
        if r < k[0] || r > k[last] {
            return S::zero();
        }
        // partition_point gives the first knot strictly greater than r.
        let i = k.partition_point(|x| *x <= r).clamp(1, last);
        let (r0, r1) = (k[i - 1], k[i]);
        let (v0, v1) = (self.values[i - 1], self.values[i]);
        v0 + (v1 - v0) * (r - r0) / (r1 - r0)
    }

    /// `∫_{0}^{ρ} ñ(r) r dr`, exact for the piecewise-linear interpolant.
    pub fn first_moment_upto(&self, rho: S) -> S {
        let third = S::one() / S::lit(3.0);
        let half = S::lit(0.5);
        let mut acc = S::zero();
        for i in 1..self.knots.len() {
            let (a, b) = (self.knots[i - 1], self.knots[i]);
            if a >= rho {
                break;
            }
            let slope = (self.values[i] - self.values[i - 1]) / (b - a);
            let icpt = self.values[i - 1] - slope * a;
            let hi = b.min(rho);
            acc = acc + icpt * (hi * hi - a * a) * half + slope * (hi * hi * hi - a * a * a) * third;
        }
        acc
    }

    /// Outer edge of the support.
    pub fn outer_radius(&self) -> S {
        let last_pos = self.values.iter().rposition(|v| *v > S::zero()).unwrap_or(0);
        self.knots[(last_pos + 1).min(self.knots.len() - 1)]
    }

    pub fn is_nonincreasing_from_origin(&self) -> bool {
        self.knots[0] == S::zero() && self.values.windows(2).all(|w| w[1] <= w[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn interpolates_and_vanishes_outside() {
        let p = RadialProfile::new(vec![1.0, 2.0, 4.0], vec![2.0, 4.0, 0.0]).unwrap();
        assert_eq!(p.eval(0.5), 0.0);
        assert_relative_eq!(p.eval(1.5), 3.0);
        assert_relative_eq!(p.eval(3.0), 2.0);
        assert_eq!(p.eval(4.5), 0.0);
        assert_eq!(p.outer_radius(), 4.0);
    }

    #[test]
    fn first_moment_matches_constant_disk() {
        let p = RadialProfile::new(vec![0.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(p.first_moment_upto(1.0), 0.5);
        assert_relative_eq!(p.first_moment_upto(5.0), 2.0);
    }

    #[test]
    fn rejects_bad_knots() {
        assert!(RadialProfile::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(matches!(RadialProfile::new(vec![0.0, 1.0], vec![0.0, 0.0]), Err(Error::ZeroDatum)));
        assert!(RadialProfile::new(vec![0.0, 1.0], vec![-1.0, 1.0]).is_err());
    }
}
