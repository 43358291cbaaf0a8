//! Bracketed solvers for monotone scalar functions.

use crate::scalar::Scalar;

/// Result of [`solve_increasing`].
#[derive(Debug, Clone, Copy)]
pub struct Root<S> {
    pub x: S,
    pub value: S,
    pub iterations: usize,
}

/// Solves `f(x) = target` for a strictly increasing `f` on a bracket with
/// `f(lo) < target <= f(hi)`.
///
/// Secant (false position) steps are taken while they contract the bracket
/// by at least half; otherwise the step falls back to bisection. Stops when
/// `|f(x) - target| <= rel_tol * |target|` or the bracket collapses to a few
/// ulps.
#[allow(clippy::too_many_arguments)]
pub fn solve_increasing<S, F>(
    f: F,
    target: S,
    mut lo: S,
    mut hi: S,
    mut f_lo: S,
    mut f_hi: S,
    rel_tol: S,
    max_iter: usize,
) -> Root<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let goal = rel_tol * target.abs();
    if (f_hi - target).abs() <= goal {
        return Root { x: hi, value: f_hi, iterations: 0 };
    }
    let mut best = if (f_lo - target).abs() < (f_hi - target).abs() { (lo, f_lo) } else { (hi, f_hi) };
    let mut bisect_next = false;
    for it in 1..=max_iter {
        let width = hi - lo;
        let x = if bisect_next || !(f_hi > f_lo) {
            lo + width * S::lit(0.5)
        } else {
            let s = lo + (target - f_lo) * width / (f_hi - f_lo);
            // Keep secant points off the bracket ends.
            let margin = width * S::lit(1e-3);
            s.max(lo + margin).min(hi - margin)
        };
        if x <= lo || x >= hi {
            return Root { x: best.0, value: best.1, iterations: it };
        }
        let fx = f(x);
        if (fx - target).abs() < (best.1 - target).abs() {
            best = (x, fx);
        }
        if (fx - target).abs() <= goal {
            return Root { x, value: fx, iterations: it };
        }
        if fx < target {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        bisect_next = hi - lo > width * S::lit(0.5);
        if hi - lo <= S::epsilon() * S::lit(4.0) * hi.abs().max(lo.abs()) {
            return Root { x: best.0, value: best.1, iterations: it };
        }
    }
    Root { x: best.0, value: best.1, iterations: max_iter }
}

/// Finds the smallest `x` in `(lo, hi]` where the monotone predicate becomes
/// true, assuming `pred(lo) == false` and `pred(hi) == true`. Returns the
/// upper end of the final bracket, so `pred` holds at the returned point.
pub fn bisect_predicate<S, P>(pred: P, mut lo: S, mut hi: S, rel_tol: S, max_iter: usize) -> S
where
    S: Scalar,
    P: Fn(S) -> bool,
{
    for _ in 0..max_iter {
        if hi - lo <= rel_tol * hi.abs() {
            break;
        }
        let mid = lo + (hi - lo) * S::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solves_saturating_curve() {
        let f = |s: f64| s / (s + 1.0);
        let r = solve_increasing(f, 0.8, 1.0, 16.0, f(1.0), f(16.0), 1e-12, 200);
        assert_relative_eq!(r.x, 4.0, max_relative = 1e-10);
    }

    #[test]
    fn secant_fallback_handles_flat_tail() {
        // Very flat near the target: plain false position would stall.
        let f = |x: f64| 1.0 - (-x).exp();
        let target = 1.0 - 1e-9;
        let r = solve_increasing(f, target, 0.0, 64.0, f(0.0), f(64.0), 1e-14, 400);
        assert!((f(r.x) - target).abs() <= 1e-13);
    }

    #[test]
    fn predicate_finds_left_end_of_plateau() {
        // Step function: 0 below 1, 0.5 on [1, 3), 1 afterwards.
        let g = |x: f64| if x < 1.0 { 0.25 * x } else if x < 3.0 { 0.5 } else { 1.0 };
        let x = bisect_predicate(|x| g(x) >= 0.5, 0.0, 10.0, 1e-13, 200);
        assert_relative_eq!(x, 1.0, max_relative = 1e-12);
    }
}
