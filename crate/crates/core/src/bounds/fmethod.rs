//! The `F`-function evaluation of `T*_{c2}(z₀)` for radial data.
//!
//! With `h(t) = [g₀^←(t)]²` on `(a, 1)` and `ρ = g₀^←(t)`, the ratio `h/h'`
//! has the closed expression `π ρ² ñ(ρ) / M`, and `h'(t) = M / (π ñ(ρ))`.

use crate::bounds::constants::MassConstants;
use crate::datum::InitialDatum;
use crate::error::{Error, Result};
use crate::numeric::roots::bisect_predicate;
use crate::scalar::Scalar;

/// Which hypothesis set of the method was verified.
#[derive(Debug, Clone, PartialEq)]
pub enum FMethodCase {
    /// `F` non-decreasing and `(h/h')(1⁻) >= ln(1/a)`.
    NonDecreasingCase,
    /// `F` strictly increasing, `(h/h')(1⁻) < ln(1/a)`, `(h/h')(a⁺) > 0`.
    StrictlyIncreasingCase,
    Inapplicable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FMethod<S> {
    pub case: FMethodCase,
    /// `+∞` when inapplicable.
    pub value: S,
    /// `F⁻¹(ln(1/a))` in the strictly increasing case.
    pub x_star: Option<S>,
}

/// Evaluator for `h`, `h/h'` and `F` of a radial datum.
pub struct FMethodState<'a, S> {
    datum: &'a InitialDatum<S>,
    k: MassConstants<S>,
}

const OFFSET: f64 = 1e-6;
const SAMPLES: usize = 400;

impl<'a, S: Scalar> FMethodState<'a, S> {
    pub fn new(datum: &'a InitialDatum<S>) -> Result<Self> {
        if !datum.is_radial() {
            return Err(Error::NotRadial);
        }
        Ok(Self { datum, k: MassConstants::new(datum.mass())? })
    }

    fn rho(&self, t: S) -> Result<S> {
        self.datum.generalized_inverse(self.datum.center(), t)
    }

    pub fn h(&self, t: S) -> Result<S> {
        let r = self.rho(t)?;
        Ok(r * r)
    }

    /// `(h/h')(t) = π ρ² ñ(ρ) / M`.
    pub fn h_over_dh(&self, t: S) -> Result<S> {
        let r = self.rho(t)?;
        Ok(S::PI() * r * r * self.datum.radial_value(r) / self.datum.mass())
    }

    /// `h'(t) = M / (π ñ(ρ))`.
    pub fn dh(&self, t: S) -> Result<S> {
        let r = self.rho(t)?;
        Ok(self.datum.mass() / (S::PI() * self.datum.radial_value(r)))
    }

    /// `F(X) = X + e^X (h/h')(e^{-X})`.
    pub fn f(&self, x: S) -> Result<S> {
        Ok(x + x.exp() * self.h_over_dh((-x).exp())?)
    }

    pub fn evaluate(&self) -> Result<FMethod<S>> {
        let y0 = self.k.log_inv_a;
        let a = self.k.a;
        let off = S::lit(OFFSET);
        let inapplicable = |why: String| FMethod { case: FMethodCase::Inapplicable(why), value: S::infinity(), x_star: None };

        // h' > 0 requires ñ(ρ(t)) > 0 across (a, 1); a zero means g has a
        // plateau there and h jumps.
        let mut xs = Vec::with_capacity(SAMPLES);
        let mut fs = Vec::with_capacity(SAMPLES);
        let lo = y0 * off;
        let hi = y0 * (S::one() - off);
        for i in 0..SAMPLES {
            let x = lo + (hi - lo) * S::from_usize_lossy(i) / S::from_usize_lossy(SAMPLES - 1);
            let t = (-x).exp();
            let r = self.rho(t)?;
            if !(self.datum.radial_value(r) > S::zero()) {
                return Ok(inapplicable(format!("density vanishes at radius {:.6} (h' undefined)", r.as_f64())));
            }
            xs.push(x);
            fs.push(self.f(x)?);
        }
        let slack = S::lit(64.0) * S::epsilon();
        let non_decreasing = fs.windows(2).all(|w| w[1] >= w[0] - slack * w[0].abs().max(S::one()));
        let strictly_increasing = fs.windows(2).all(|w| w[1] > w[0]);

        let hh_top = self.h_over_dh(S::one() - off)?;
        let hh_bottom = self.h_over_dh(a + off * (S::one() - a))?;

        if non_decreasing && hh_top >= y0 {
            let h1 = match self.datum.generalized_inverse(self.datum.center(), S::one()) {
                Ok(r) => r * r,
                Err(Error::Unbounded) => S::infinity(),
                Err(e) => return Err(e),
            };
            return Ok(FMethod { case: FMethodCase::NonDecreasingCase, value: h1 / (S::lit(4.0) * y0), x_star: None });
        }
        if strictly_increasing && hh_top < y0 && hh_bottom > S::zero() {
            let x_star = bisect_predicate(|x| self.f(x).map(|v| v >= y0).unwrap_or(true), lo, hi, S::epsilon() * S::lit(8.0), 300);
            let t = (-x_star).exp();
            let s = t * self.dh(t)? / S::lit(4.0);
            return Ok(FMethod { case: FMethodCase::StrictlyIncreasingCase, value: s, x_star: Some(x_star) });
        }
        Ok(inapplicable(format!(
            "F non-decreasing: {}, strictly increasing: {}, (h/h')(1-) = {:.6e}, (h/h')(a+) = {:.6e}, ln(1/a) = {:.6e}",
            non_decreasing,
            strictly_increasing,
            hh_top.as_f64(),
            hh_bottom.as_f64(),
            y0.as_f64()
        )))
    }
}

/// `T*_{c2}(z₀)` via the `F`-function method.
pub fn f_method_bound<S: Scalar>(datum: &InitialDatum<S>) -> Result<FMethod<S>> {
    FMethodState::new(datum)?.evaluate()
}
