//! Special functions needed by the closed forms: log-gamma, the scaled
//! modified Bessel function `I0e`, and the regularized upper incomplete gamma
//! for integer shape.

use crate::scalar::Scalar;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma<S: Scalar>(x: S) -> S {
    if x < S::lit(0.5) {
        // Reflection keeps the Lanczos sum in its accurate range.
        let pi = S::PI();
        return (pi / (pi * x).sin()).ln() - ln_gamma(S::one() - x);
    }
    let x = x - S::one();
    let mut acc = S::lit(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc = acc + S::lit(c) / (x + S::from_usize_lossy(i));
    }
    let t = x + S::lit(LANCZOS_G + 0.5);
    S::lit(0.5) * (S::lit(2.0) * S::PI()).ln() + (x + S::lit(0.5)) * t.ln() - t + acc.ln()
}

/// `Γ(x)` for `x > 0`.
pub fn gamma<S: Scalar>(x: S) -> S {
    ln_gamma(x).exp()
}

/// `n!` as a scalar.
pub fn factorial<S: Scalar>(n: u32) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::lit(k as f64))
}

/// Exponentially scaled modified Bessel function of the first kind, order
/// zero: `e^{-|x|} I0(x)`.
pub fn bessel_i0e<S: Scalar>(x: S) -> S {
    let x = x.abs();
    if x <= S::lit(20.0) {
        let q = x * x * S::lit(0.25);
        let mut term = S::one();
        let mut sum = S::one();
        let mut k = 1usize;
        loop {
            let kk = S::from_usize_lossy(k);
            term = term * q / (kk * kk);
            sum = sum + term;
            if term <= sum * S::epsilon() || k > 500 {
                break;
            }
            k += 1;
        }
        sum * (-x).exp()
    } else {
        // Asymptotic series; at x > 20 the smallest term is far below epsilon.
        let mut term = S::one();
        let mut sum = S::one();
        for k in 1..60usize {
            let kk = S::from_usize_lossy(k);
            let odd = S::lit(2.0) * kk - S::one();
            let next = term * odd * odd / (S::lit(8.0) * kk * x);
            if next >= term {
                break;
            }
            term = next;
            sum = sum + term;
            if term <= sum * S::epsilon() {
                break;
            }
        }
        sum / (S::lit(2.0) * S::PI() * x).sqrt()
    }
}

/// `Γ(n+1, x) / n! = e^{-x} Σ_{k=0}^{n} x^k / k!` for integer `n >= 0`.
pub fn upper_gamma_regularized_int<S: Scalar>(n: u32, x: S) -> S {
    let mut term = S::one();
    let mut sum = S::one();
    for k in 1..=n {
        term = term * x / S::lit(k as f64);
        sum = sum + term;
    }
    (sum.ln() - x).exp()
}

/// `γ(n+1, x) / n!`, the complement of [`upper_gamma_regularized_int`].
///
/// Uses the convergent series directly for small `x` so no cancellation occurs.
pub fn lower_gamma_regularized_int<S: Scalar>(n: u32, x: S) -> S {
    let np1 = S::lit(f64::from(n) + 1.0);
    if x <= S::zero() {
        return S::zero();
    }
    if x < np1 {
        // x^{n+1} e^{-x} / (n+1)! * Σ_j x^j (n+1)!/(n+1+j)!
        let mut term = S::one();
        let mut sum = S::one();
        let mut j = 1usize;
        loop {
            term = term * x / (np1 + S::from_usize_lossy(j));
            sum = sum + term;
            if term <= sum * S::epsilon() || j > 1000 {
                break;
            }
            j += 1;
        }
        let log_lead = np1 * x.ln() - x - ln_gamma(np1 + S::one());
        (log_lead + sum.ln()).exp()
    } else {
        S::one() - upper_gamma_regularized_int(n, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_matches_factorials_and_half_integers() {
        assert_relative_eq!(gamma(5.0_f64), 24.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(0.5_f64), std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(2.5_f64), 0.75 * std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(ln_gamma(101.0_f64), (1..=100).map(|k| (k as f64).ln()).sum::<f64>(), max_relative = 1e-13);
        assert_relative_eq!(factorial::<f64>(6), 720.0);
    }

    #[test]
    fn i0e_matches_reference_values() {
        // I0(1) = 1.2660658777520082
        assert_relative_eq!(bessel_i0e(1.0_f64) * 1.0_f64.exp(), 1.266_065_877_752_008_4, max_relative = 1e-14);
        assert_relative_eq!(bessel_i0e(0.0_f64), 1.0);
        // Continuity across the series / asymptotic switch.
        let below = bessel_i0e(20.0_f64);
        let above = bessel_i0e(20.0_f64 + 1e-9);
        assert_relative_eq!(below, above, max_relative = 1e-9);
    }

    #[test]
    fn i0e_agrees_with_angular_average() {
        // I0(x) = (1/π) ∫_0^π e^{x cos φ} dφ, scaled.
        for &x in &[0.3_f64, 4.0, 19.0, 21.0, 80.0] {
            let n = 4000;
            let h = std::f64::consts::PI / n as f64;
            let trap: f64 = (0..=n)
                .map(|k| {
                    let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                    w * (x * ((k as f64) * h).cos() - x).exp()
                })
                .sum::<f64>()
                * h
                / std::f64::consts::PI;
            assert_relative_eq!(bessel_i0e(x), trap, max_relative = 1e-12);
        }
    }

    #[test]
    fn incomplete_gamma_pairs_sum_to_one() {
        for n in 0..5 {
            for &x in &[0.01_f64, 0.5, 2.0, 7.0, 30.0] {
                let s = upper_gamma_regularized_int(n, x) + lower_gamma_regularized_int(n, x);
                assert_relative_eq!(s, 1.0, max_relative = 1e-13);
            }
        }
        assert_relative_eq!(lower_gamma_regularized_int(1, 1.0_f64), 1.0 - 2.0 / 1.0_f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(lower_gamma_regularized_int(0, 1e-8_f64), 1e-8, max_relative = 1e-7);
    }
}
