use crate::error::{Error, Result};
use crate::scalar::{critical_mass, Scalar};

/// `M`, `L(M) = 2M²/(3M - 8π)`, `a = L/M` and `ln(1/a)` for a supercritical
/// mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConstants<S> {
    pub mass: S,
    pub l: S,
    pub a: S,
    pub log_inv_a: S,
}

impl<S: Scalar> MassConstants<S> {
    pub fn new(mass: S) -> Result<Self> {
        let crit = critical_mass::<S>();
        if !(mass > crit) || !mass.is_finite() {
            return Err(Error::SubcriticalMass { mass: mass.as_f64() });
        }
        let two = S::lit(2.0);
        let denom = S::lit(3.0) * mass - crit;
        let l = two * mass * mass / denom;
        let a = two * mass / denom;
        // ln(1/a) = ln(1 + (M - 8π)/2M), kept accurate as M ↓ 8π.
        let log_inv_a = ((mass - crit) / (two * mass)).ln_1p();
        Ok(Self { mass, l, a, log_inv_a })
    }

    /// `M - 8π`.
    pub fn excess(&self) -> S {
        self.mass - critical_mass::<S>()
    }
}

/// `c₀ = 2 ln(3/2)`, the Gaussian sandwich constant.
pub fn c0<S: Scalar>() -> S {
    S::lit(2.0) * S::lit(1.5).ln()
}

/// `p₀ = 1 / ln(2e/3)`, the exponent threshold between the two lower-bound
/// regimes.
pub fn p0<S: Scalar>() -> S {
    S::one() / (S::lit(2.0) * S::E() / S::lit(3.0)).ln()
}

/// `κ = (2e/3) ln(3/2)`.
pub fn kappa<S: Scalar>() -> S {
    S::lit(2.0) * S::E() / S::lit(3.0) * S::lit(1.5).ln()
}

/// Conjugate exponent `p' = p/(p-1)`, with `1' = ∞` and `∞' = 1`.
pub fn conjugate<S: Scalar>(p: S) -> S {
    if p.is_infinite() {
        S::one()
    } else if p == S::one() {
        S::infinity()
    } else {
        p / (p - S::one())
    }
}

// x^{1/x}, tending to 1 at infinity.
fn root_self<S: Scalar>(x: S) -> S {
    if x.is_infinite() {
        S::one()
    } else {
        x.powf(S::one() / x)
    }
}

/// Sharp `Lᵖ → L^q` constant of the heat semigroup on `ℝⁿ`:
/// `C(n,p,q) = (C_p/C_q)ⁿ [4π/(1/p - 1/q)]^{-(n/2)(1/p - 1/q)}` with
/// `C_p² = p^{1/p} / p'^{1/p'}`.
pub fn heat_constant<S: Scalar>(n: u32, p: S, q: S) -> Result<S> {
    if !(p >= S::one() && q >= p) {
        return Err(Error::InvalidExponents { p: p.as_f64(), q: q.as_f64() });
    }
    let cp2 = |x: S| root_self(x) / root_self(conjugate(x));
    let nn = S::lit(f64::from(n));
    let ratio = (cp2(p) / cp2(q)).powf(nn * S::lit(0.5));
    let gap = p.recip() - q.recip();
    if gap == S::zero() {
        return Ok(ratio);
    }
    let four_pi = S::lit(4.0) * S::PI();
    Ok(ratio * (four_pi / gap).powf(-nn * S::lit(0.5) * gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn mass_constants_at_sixteen_pi() {
        let c = MassConstants::new(16.0 * PI).unwrap();
        assert_relative_eq!(c.l, 12.8 * PI, max_relative = 1e-15);
        assert_relative_eq!(c.a, 0.8, max_relative = 1e-15);
        assert_relative_eq!(c.log_inv_a, 1.25_f64.ln(), max_relative = 1e-15);
    }

    #[test]
    fn near_critical_limits() {
        let c = MassConstants::new(8.0 * PI * (1.0 + 1e-9)).unwrap();
        assert_relative_eq!(c.l, 8.0 * PI, max_relative = 1e-8);
        assert!(c.a < 1.0 && c.a > 1.0 - 1e-8);
        assert!(c.log_inv_a > 0.0);
    }

    #[test]
    fn subcritical_is_rejected() {
        assert!(matches!(MassConstants::new(8.0 * PI), Err(Error::SubcriticalMass { .. })));
        assert!(matches!(MassConstants::new(1.0), Err(Error::SubcriticalMass { .. })));
    }

    #[test]
    fn invariants_over_mass_range() {
        for k in 1..200 {
            let m = 8.0 * PI * (1.0 + 0.05 * k as f64);
            let c = MassConstants::new(m).unwrap();
            assert!(c.l < m && c.a > 2.0 / 3.0 && c.a < 1.0);
            assert!(c.log_inv_a > 0.0 && c.log_inv_a < 1.5_f64.ln());
            assert_relative_eq!(c.log_inv_a, -c.a.ln(), max_relative = 1e-12);
        }
    }

    #[test]
    fn named_constants() {
        assert_relative_eq!(c0::<f64>(), 0.810_930_216_216_329, max_relative = 1e-14);
        assert_relative_eq!(p0::<f64>(), 1.682, max_relative = 1e-3);
        assert_relative_eq!(kappa::<f64>(), 0.735, max_relative = 1e-3);
    }

    #[test]
    fn heat_constant_limits() {
        for &p in &[1.0, 1.5, 3.0, f64::INFINITY] {
            assert_relative_eq!(heat_constant(2, p, p).unwrap(), 1.0);
        }
        assert_relative_eq!(heat_constant(2, 1.0, f64::INFINITY).unwrap(), 1.0 / (4.0 * PI), max_relative = 1e-15);
        for &p in &[1.2_f64, 2.0, 5.0] {
            let pc = p / (p - 1.0);
            let expect = pc.powf(-1.0 / pc) * (4.0 * PI).powf(-1.0 / p);
            assert_relative_eq!(heat_constant(2, p, f64::INFINITY).unwrap(), expect, max_relative = 1e-14);
        }
        assert!(matches!(heat_constant(2, 2.0, 1.5), Err(Error::InvalidExponents { .. })));
        assert!(matches!(heat_constant(2, 0.5, 1.5), Err(Error::InvalidExponents { .. })));
    }

    #[test]
    fn heat_constant_is_continuous_in_q() {
        let a = heat_constant(2, 2.0, 2.0 + 1e-9).unwrap();
        assert_relative_eq!(a, 1.0, max_relative = 1e-6);
        let b = heat_constant(2, 2.0, 1e12).unwrap();
        assert_relative_eq!(b, heat_constant(2, 2.0, f64::INFINITY).unwrap(), max_relative = 1e-9);
    }
}
