//! Lower bounds on `T*_c` from `Lᵖ` norms of the datum.

use crate::bounds::constants::{conjugate, p0, MassConstants};
use crate::datum::{DatumKind, InitialDatum};
use crate::error::{Error, Result};
use crate::numeric::optimize::grid_then_golden;
use crate::scalar::{critical_mass, Scalar};

/// Which closed regime formula applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LowerRegime {
    /// `p >= p₀`, or `p < p₀` under the small-mass condition:
    /// `(πe)⁻¹ / (4 ln(1/a)) · (M/‖n₀‖_p)^{p'}`.
    LargeExponent,
    /// `p < p₀` and large mass: `(p'/4π) (L/‖n₀‖_p)^{p'}`.
    SmallExponent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound<S> {
    /// Best of the supremum form and the regime formula.
    pub value: S,
    pub sup_form: S,
    /// Conjugate exponent `q'` attaining the supremum form.
    pub sup_maximizer: S,
    pub regime_value: S,
    pub regime: LowerRegime,
}

const Q_PRIME_CAP: f64 = 1e6;

/// `ln[(q'/4π) (L/‖n₀‖_q)^{q'}]`.
fn log_sup_objective<S: Scalar>(datum: &InitialDatum<S>, l: S, qp: S) -> S {
    let q = conjugate(qp);
    match datum.lp_norm(q) {
        Ok(norm) if norm > S::zero() => qp.ln() - (S::lit(4.0) * S::PI()).ln() + qp * (l.ln() - norm.ln()),
        _ => S::neg_infinity(),
    }
}

/// `sup_{1<q<=p} (q'/4π) (L/‖n₀‖_q)^{q'}`, maximized numerically over
/// `ln q'` on `[ln p', ln 10⁶]`. Returns the value and the maximizing `q'`.
pub fn lower_sup_form<S: Scalar>(datum: &InitialDatum<S>, p: S) -> Result<(S, S)> {
    if !(p > S::one()) {
        return Err(Error::param("p", format!("must exceed 1, got {}", p)));
    }
    let k = MassConstants::new(datum.mass())?;
    let lo = conjugate(p).ln();
    let hi = S::lit(Q_PRIME_CAP).ln();
    let m = grid_then_golden(|u| -log_sup_objective(datum, k.l, u.exp()), lo, hi, 81, S::lit(1e-12));
    if !m.value.is_finite() {
        return Err(Error::NormDivergence { p: p.as_f64() });
    }
    Ok(((-m.value).exp(), m.x.exp()))
}

/// Lower bound on `T*_c` for `n₀ ∈ L¹ ∩ Lᵖ`, `1 < p <= ∞`.
///
/// For the Gaussian family the supremum form is attained at
/// `q' = 1/(1-a)`, where it equals `T*_c`; that closed form is used
/// instead of the numeric maximization.
pub fn lower_bound<S: Scalar>(datum: &InitialDatum<S>, p: S) -> Result<LowerBound<S>> {
    if !(p > S::one()) {
        return Err(Error::param("p", format!("must exceed 1, got {}", p)));
    }
    let k = MassConstants::new(datum.mass())?;
    let (sup_form, sup_maximizer) = match datum.kind() {
        DatumKind::Gaussian { sigma, .. } if conjugate(p) <= S::one() / (S::one() - k.a) => {
            (*sigma * k.a / (S::one() - k.a), S::one() / (S::one() - k.a))
        }
        _ => lower_sup_form(datum, p)?,
    };
    let norm = datum.lp_norm(p)?;
    let pc = conjugate(p);
    let m = datum.mass();
    let small_mass = !p.is_infinite() && {
        let denom = S::lit(3.0) - S::lit(2.0) * (S::one() - p.recip()).exp();
        m <= critical_mass::<S>() / denom
    };
    let (regime, regime_value) = if p >= p0::<S>() || small_mass {
        let v = (S::PI() * S::E()).recip() / (S::lit(4.0) * k.log_inv_a) * (m / norm).powf(pc);
        (LowerRegime::LargeExponent, v)
    } else {
        let v = pc / (S::lit(4.0) * S::PI()) * (k.l / norm).powf(pc);
        (LowerRegime::SmallExponent, v)
    };
    Ok(LowerBound { value: sup_form.max(regime_value), sup_form, sup_maximizer, regime_value, regime })
}
