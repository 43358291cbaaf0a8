//! Planar points, convex hulls, minimal enclosing circles and diameters.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self { x: S::zero(), y: S::zero() }
    }

    pub fn dist2(&self, other: &Self) -> S {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(&self, other: &Self) -> S {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(&self) -> S {
        self.x.hypot(self.y)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.x - other.x, self.y - other.y)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y)
    }

    pub fn scale(&self, k: S) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

fn cross<S: Scalar>(o: &Point<S>, a: &Point<S>, b: &Point<S>) -> S {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped.
pub fn convex_hull<S: Scalar>(points: &[Point<S>]) -> Vec<Point<S>> {
    let mut pts: Vec<Point<S>> = points.to_vec();
    pts.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point<S>> = Vec::with_capacity(2 * pts.len());
    for p in pts.iter() {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= S::zero() {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower = hull.len() + 1;
    for p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= S::zero() {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle<S> {
    pub center: Point<S>,
    pub radius: S,
}

impl<S: Scalar> Circle<S> {
    fn contains(&self, p: &Point<S>) -> bool {
        let slack = S::epsilon() * S::lit(64.0) * (S::one() + self.radius);
        p.dist(&self.center) <= self.radius + slack
    }

    fn from_two(a: &Point<S>, b: &Point<S>) -> Self {
        let center = a.add(b).scale(S::lit(0.5));
        Self { center, radius: a.dist(b) * S::lit(0.5) }
    }

    fn from_three(a: &Point<S>, b: &Point<S>, c: &Point<S>) -> Self {
        let bx = b.x - a.x;
        let by = b.y - a.y;
        let cx = c.x - a.x;
        let cy = c.y - a.y;
        let d = S::lit(2.0) * (bx * cy - by * cx);
        if d.abs() <= S::epsilon() * (bx.abs() + by.abs() + cx.abs() + cy.abs()).powi(2) {
            // Collinear: the widest pair decides.
            let cands = [Self::from_two(a, b), Self::from_two(a, c), Self::from_two(b, c)];
            return cands
                .into_iter()
                .fold(cands[0], |m, k| if k.radius > m.radius { k } else { m });
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        let center = Point::new(a.x + ux, a.y + uy);
        Self { center, radius: ux.hypot(uy) }
    }
}

/// Smallest enclosing circle (Welzl, iterative form). The input order is
/// shuffled with a fixed seed so results are reproducible.
pub fn enclosing_circle<S: Scalar>(points: &[Point<S>]) -> Option<Circle<S>> {
    if points.is_empty() {
        return None;
    }
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    pts.shuffle(&mut rng);

    let mut c = Circle { center: pts[0], radius: S::zero() };
    for i in 1..pts.len() {
        if c.contains(&pts[i]) {
            continue;
        }
        c = Circle { center: pts[i], radius: S::zero() };
        for j in 0..i {
            if c.contains(&pts[j]) {
                continue;
            }
            c = Circle::from_two(&pts[i], &pts[j]);
            for k in 0..j {
                if !c.contains(&pts[k]) {
                    c = Circle::from_three(&pts[i], &pts[j], &pts[k]);
                }
            }
        }
    }
    Some(c)
}

/// Largest pairwise distance, computed over the hull vertices.
pub fn diameter<S: Scalar>(points: &[Point<S>]) -> S {
    let hull = convex_hull(points);
    let mut best = S::zero();
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            best = best.max(hull[i].dist(&hull[j]));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn square() -> Vec<Point<f64>> {
        let mut v = Vec::new();
        for i in 0..=4 {
            for j in 0..=4 {
                v.push(Point::new(i as f64, j as f64));
            }
        }
        v
    }

    #[test]
    fn hull_of_lattice_square_is_four_corners() {
        let h = convex_hull(&square());
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn square_circle_and_diameter() {
        let c = enclosing_circle(&square()).unwrap();
        assert_relative_eq!(c.radius, 8.0_f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(c.center.x, 2.0, epsilon = 1e-12);
        assert_relative_eq!(c.center.y, 2.0, epsilon = 1e-12);
        assert_relative_eq!(diameter(&square()), 32.0_f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_side() {
        let pts = [Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(5.0, 1.0)];
        let c = enclosing_circle(&pts).unwrap();
        assert_relative_eq!(c.radius, 5.0, max_relative = 1e-12);
    }

    #[test]
    fn equilateral_triangle_circumradius() {
        let h = 3.0_f64.sqrt() / 2.0;
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(0.5, h)];
        let c = enclosing_circle(&pts).unwrap();
        assert_relative_eq!(c.radius, 1.0 / 3.0_f64.sqrt(), max_relative = 1e-12);
    }
}
