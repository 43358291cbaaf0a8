use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::scalar::Scalar;

/// Uniform Cartesian grid of non-negative cell values.
///
/// Values are row-major: row `i` holds cells whose centers sit at
/// `y = origin.y + (i + 0.5) * cell_size`, column `j` at
/// `x = origin.x + (j + 0.5) * cell_size`. Each cell stands for a constant
/// density over its square (midpoint rule).
#[derive(Debug, Clone, PartialEq)]
pub struct CartesianGrid<S> {
    rows: usize,
    cols: usize,
    cell_size: S,
    origin: Point<S>,
    values: Vec<S>,
    support_threshold: S,
}

impl<S: Scalar> CartesianGrid<S> {
    pub fn new(rows: usize, cols: usize, cell_size: S, origin: Point<S>, values: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::param("grid", "rows and cols must be positive"));
        }
        if values.len() != rows * cols {
            return Err(Error::param(
                "grid",
                format!("expected {} values for {}x{} grid, got {}", rows * cols, rows, cols, values.len()),
            ));
        }
        if !(cell_size > S::zero()) || !cell_size.is_finite() {
            return Err(Error::param("cell_size", "must be positive and finite"));
        }
        if !origin.x.is_finite() || !origin.y.is_finite() {
            return Err(Error::param("origin", "must be finite"));
        }
        if let Some((k, v)) = values.iter().enumerate().find(|(_, v)| !(**v >= S::zero()) || !v.is_finite()) {
            return Err(Error::param("grid", format!("value {} at index {} is negative or not finite", v, k)));
        }
        Ok(Self { rows, cols, cell_size, origin, values, support_threshold: S::zero() })
    }

    /// Samples `f` at every cell center.
    pub fn from_fn<F: Fn(Point<S>) -> S>(rows: usize, cols: usize, cell_size: S, origin: Point<S>, f: F) -> Result<Self> {
        let mut values = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let c = Point::new(
                    origin.x + (S::from_usize_lossy(j) + S::lit(0.5)) * cell_size,
                    origin.y + (S::from_usize_lossy(i) + S::lit(0.5)) * cell_size,
                );
                values.push(f(c));
            }
        }
        Self::new(rows, cols, cell_size, origin, values)
    }

    /// Cells with value above `threshold * max` count as support. Default 0.
    pub fn with_support_threshold(mut self, threshold: S) -> Result<Self> {
        if !(threshold >= S::zero() && threshold < S::one()) {
            return Err(Error::param("support_threshold", "must lie in [0, 1)"));
        }
        self.support_threshold = threshold;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn cell_size(&self) -> S {
        self.cell_size
    }

    pub fn origin(&self) -> Point<S> {
        self.origin
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn support_threshold(&self) -> S {
        self.support_threshold
    }

    pub fn cell_area(&self) -> S {
        self.cell_size * self.cell_size
    }

    pub fn max_value(&self) -> S {
        self.values.iter().copied().fold(S::zero(), S::max)
    }

    /// Cell center relative to the datum center, paired with its value.
    pub fn cells(&self) -> impl Iterator<Item = (Point<S>, S)> + '_ {
        let h = self.cell_size;
        (0..self.rows).flat_map(move |i| {
            (0..self.cols).map(move |j| {
                let p = Point::new(
                    self.origin.x + (S::from_usize_lossy(j) + S::lit(0.5)) * h,
                    self.origin.y + (S::from_usize_lossy(i) + S::lit(0.5)) * h,
                );
                (p, self.values[i * self.cols + j])
            })
        })
    }

    /// Cells with positive value.
    pub fn nonzero_cells(&self) -> impl Iterator<Item = (Point<S>, S)> + '_ {
        self.cells().filter(|(_, v)| *v > S::zero())
    }

    pub(crate) fn active_corners(&self) -> Vec<Point<S>> {
        let cut = self.support_threshold * self.max_value();
        let half = self.cell_size * S::lit(0.5);
        let mut out = Vec::new();
        for (c, v) in self.cells() {
            if v > cut && v > S::zero() {
                for (sx, sy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                    out.push(Point::new(c.x + S::lit(sx) * half, c.y + S::lit(sy) * half));
                }
            }
        }
        out
    }
}

pub(crate) fn weighted_median<S: Scalar>(mut pairs: Vec<(S, S)>) -> S {
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total: S = pairs.iter().map(|p| p.1).sum();
    let half = total * S::lit(0.5);
    let mut acc = S::zero();
    for (x, w) in &pairs {
        acc = acc + *w;
        if acc >= half {
            return *x;
        }
    }
    pairs.last().map(|p| p.0).unwrap_or(S::zero())
}
