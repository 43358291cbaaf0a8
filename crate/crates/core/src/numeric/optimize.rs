//! Derivative-free minimizers: golden-section search on an interval, a
//! grid-then-golden refinement for objectives that are only piecewise
//! unimodal, and a compass (pattern) search over the plane.

use crate::geometry::Point;
use crate::scalar::Scalar;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<S> {
    pub x: S,
    pub value: S,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `tol * (|a| + |b|) + tol`. The
/// returned point is the best one evaluated, which includes both endpoints
/// so boundary minima are reported exactly.
pub fn golden_section<S, F>(f: F, a: S, b: S, tol: S, max_iter: usize) -> Minimum<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let (mut a, mut b) = if a <= b { (a, b) } else { (b, a) };
    let r = S::lit(INV_PHI);
    let fa = f(a);
    let fb = f(b);
    let mut best = if fa <= fb { Minimum { x: a, value: fa } } else { Minimum { x: b, value: fb } };

    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if (b - a) <= tol * (a.abs() + b.abs()) + tol {
            break;
        }
        // NaN compares false, so an undefined value never wins.
        if f1 < f2 || (f2.is_nan() && !f1.is_nan()) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
        for (x, v) in [(x1, f1), (x2, f2)] {
            if v < best.value || (best.value.is_nan() && !v.is_nan()) {
                best = Minimum { x, value: v };
            }
        }
    }
    best
}

/// Evaluates `f` on `n >= 3` equally spaced points of `[a, b]`, then refines
/// around the best grid point with golden-section search.
pub fn grid_then_golden<S, F>(f: F, a: S, b: S, n: usize, tol: S) -> Minimum<S>
where
    S: Scalar,
    F: Fn(S) -> S,
{
    let n = n.max(3);
    let step = (b - a) / S::from_usize_lossy(n - 1);
    let grid: Vec<Minimum<S>> = (0..n)
        .map(|i| {
            let x = if i == n - 1 { b } else { a + step * S::from_usize_lossy(i) };
            Minimum { x, value: f(x) }
        })
        .collect();
    let (i_best, grid_best) = grid
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.value.is_nan())
        .fold((0, Minimum { x: a, value: S::infinity() }), |acc, (i, m)| {
            if m.value < acc.1.value {
                (i, *m)
            } else {
                acc
            }
        });
    if !grid_best.value.is_finite() {
        return grid_best;
    }
    let lo = grid[i_best.saturating_sub(1)].x;
    let hi = grid[(i_best + 1).min(n - 1)].x;
    let refined = golden_section(&f, lo, hi, tol, 200);
    if refined.value < grid_best.value {
        refined
    } else {
        grid_best
    }
}

/// Outcome of [`compass_search`]: best point, its value, and the sequence of
/// accepted improvements (the search certificate).
#[derive(Debug, Clone)]
pub struct PlaneSearch<S> {
    pub point: Point<S>,
    pub value: S,
    pub trace: Vec<(Point<S>, S)>,
    pub evaluations: usize,
}

/// Multi-start compass search minimizing `f` over the plane.
///
/// Each start polls the eight compass and diagonal directions at the current
/// step, moves on improvement, and halves the step otherwise, until the step
/// drops below `min_step`.
pub fn compass_search<S, F>(f: F, seeds: &[Point<S>], initial_step: S, min_step: S, max_evals: usize) -> PlaneSearch<S>
where
    S: Scalar,
    F: Fn(Point<S>) -> S,
{
    let diag = S::FRAC_1_SQRT_2();
    let dirs = [
        (S::one(), S::zero()),
        (-S::one(), S::zero()),
        (S::zero(), S::one()),
        (S::zero(), -S::one()),
        (diag, diag),
        (-diag, diag),
        (diag, -diag),
        (-diag, -diag),
    ];
    let mut evaluations = 0usize;
    let mut overall: Option<PlaneSearch<S>> = None;
    for &seed in seeds {
        let mut point = seed;
        let mut value = f(point);
        evaluations += 1;
        let mut trace = vec![(point, value)];
        let mut step = initial_step;
        while step >= min_step && evaluations < max_evals {
            let mut moved = false;
            for &(dx, dy) in &dirs {
                let cand = Point::new(point.x + dx * step, point.y + dy * step);
                let v = f(cand);
                evaluations += 1;
                if v < value {
                    point = cand;
                    value = v;
                    trace.push((point, value));
                    moved = true;
                    break;
                }
            }
            if !moved {
                step = step * S::lit(0.5);
            }
        }
        let better = match &overall {
            None => true,
            Some(o) => value < o.value,
        };
        if better {
            overall = Some(PlaneSearch { point, value, trace, evaluations });
        }
    }
    let mut out = overall.unwrap_or(PlaneSearch {
        point: Point::origin(),
        value: S::infinity(),
        trace: Vec::new(),
        evaluations,
    });
    out.evaluations = evaluations;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn golden_finds_interior_minimum() {
        let m = golden_section(|x: f64| (x - 0.3).powi(2) + 1.0, 0.0, 2.0, 1e-12, 300);
        assert_relative_eq!(m.x, 0.3, max_relative = 1e-6);
        assert_relative_eq!(m.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn golden_reports_boundary_minimum() {
        let m = golden_section(|x: f64| x, 0.0, 1.0, 1e-12, 300);
        assert_eq!(m.x, 0.0);
    }

    #[test]
    fn grid_escapes_local_minimum() {
        let f = |x: f64| (x * 3.0).sin() + 0.1 * x;
        let m = grid_then_golden(f, 0.0, 10.0, 200, 1e-12);
        // Global minimum solves 3 cos 3x = -0.1 just below x = π/2.
        let exact = (std::f64::consts::PI * 2.0 - (-1.0_f64 / 30.0).acos()) / 3.0;
        assert_relative_eq!(m.x, exact, max_relative = 1e-6);
    }

    #[test]
    fn compass_finds_paraboloid_minimum() {
        let target = Point::new(1.25_f64, -0.5);
        let s = compass_search(|p: Point<f64>| p.dist2(&target), &[Point::origin()], 1.0, 1e-9, 10_000);
        assert!(s.point.dist(&target) < 1e-8);
        assert!(s.trace.len() > 1);
    }
}
