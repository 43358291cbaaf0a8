//! Datum spec files: a JSON object tagged by `family`.
//!
//! ```json
//! {"family": "disk", "height": 16.0, "radius": 1.0, "center": [0.0, 0.0]}
//! {"family": "grid", "grid": {"path": "cells.csv", "rows": 64, "cols": 64,
//!                             "cell_size": 0.05, "origin": [-1.6, -1.6]}}
//! ```
//!
//! Non-Gaussian families also accept `sigma` for `height`.
//!
//! Grid values come from a CSV of `rows` lines with `cols` numbers each, or
//! from a `.bin` file of `rows * cols` little-endian `f64` in row-major
//! order. Relative paths are resolved against the spec file's directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pks_core::datum::{CartesianGrid, InitialDatum, RadialProfile};
use pks_core::geometry::Point;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DatumSpec {
    Gaussian {
        mass: f64,
        sigma: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    #[serde(alias = "disk_indicator")]
    Disk {
        #[serde(alias = "sigma")]
        height: f64,
        radius: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    Annulus {
        #[serde(alias = "sigma")]
        height: f64,
        r1: f64,
        r2: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    PolyGaussian {
        #[serde(alias = "sigma")]
        height: f64,
        n: u32,
        alpha: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    DiffGaussians {
        #[serde(alias = "sigma")]
        height: f64,
        d: f64,
        b: f64,
        #[serde(default)]
        center: [f64; 2],
    },
    RadialProfile {
        knots: Vec<f64>,
        values: Vec<f64>,
        #[serde(default)]
        center: [f64; 2],
    },
    Grid {
        grid: GridRef,
        #[serde(default)]
        support_threshold: f64,
        #[serde(default)]
        center: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridRef {
    pub path: PathBuf,
    pub rows: usize,
    pub cols: usize,
    pub cell_size: f64,
    #[serde(default)]
    pub origin: [f64; 2],
}

impl DatumSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid datum spec")
    }

    pub fn read(path: &Path) -> Result<(Self, PathBuf)> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read spec file {}", path.display()))?;
        let spec = Self::parse(&text).with_context(|| format!("in {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((spec, base))
    }

    pub fn family(&self) -> &'static str {
        match self {
            DatumSpec::Gaussian { .. } => "gaussian",
            DatumSpec::Disk { .. } => "disk",
            DatumSpec::Annulus { .. } => "annulus",
            DatumSpec::PolyGaussian { .. } => "poly_gaussian",
            DatumSpec::DiffGaussians { .. } => "diff_gaussians",
            DatumSpec::RadialProfile { .. } => "radial_profile",
            DatumSpec::Grid { .. } => "grid",
        }
    }

    /// Builds the datum, loading grid values relative to `base`.
    pub fn build(&self, base: &Path) -> Result<InitialDatum<f64>> {
        let pt = |c: &[f64; 2]| Point::new(c[0], c[1]);
        let d = match self {
            DatumSpec::Gaussian { mass, sigma, center } => InitialDatum::gaussian(*mass, *sigma, pt(center)),
            DatumSpec::Disk { height, radius, center } => InitialDatum::disk(*height, *radius, pt(center)),
            DatumSpec::Annulus { height, r1, r2, center } => InitialDatum::annulus(*height, *r1, *r2, pt(center)),
            DatumSpec::PolyGaussian { height, n, alpha, center } => {
                InitialDatum::poly_gaussian(*height, *n, *alpha, pt(center))
            }
            DatumSpec::DiffGaussians { height, d, b, center } => InitialDatum::diff_gaussians(*height, *d, *b, pt(center)),
            DatumSpec::RadialProfile { knots, values, center } => {
                RadialProfile::new(knots.clone(), values.clone()).and_then(|p| InitialDatum::radial_profile(p, pt(center)))
            }
            DatumSpec::Grid { grid, support_threshold, center } => {
                let values = load_grid_values(&base.join(&grid.path), grid.rows, grid.cols)?;
                CartesianGrid::new(grid.rows, grid.cols, grid.cell_size, pt(&grid.origin), values)
                    .and_then(|g| g.with_support_threshold(*support_threshold))
                    .and_then(|g| InitialDatum::grid(g, pt(center)))
            }
        };
        d.with_context(|| format!("invalid {} datum", self.family()))
    }

    /// A copy with `param` (`mass`, `sigma` or `R`) set to `value`. For
    /// non-Gaussian families `sigma` is the height and `mass` rescales it.
    pub fn with_param(&self, param: &str, value: f64, base: &Path) -> Result<Self> {
        let mut s = self.clone();
        match (&mut s, param) {
            (DatumSpec::Gaussian { mass, .. }, "mass") => *mass = value,
            (DatumSpec::Gaussian { sigma, .. }, "sigma") => *sigma = value,
            (DatumSpec::Disk { radius, .. }, "R") => *radius = value,
            (
                DatumSpec::Disk { height, .. }
                | DatumSpec::Annulus { height, .. }
                | DatumSpec::PolyGaussian { height, .. }
                | DatumSpec::DiffGaussians { height, .. },
                "sigma",
            ) => *height = value,
            (_, "mass") => {
                // Every non-Gaussian family is linear in its height.
                let m = self.build(base)?.mass();
                s.scale_density(value / m)?;
            }
            (_, p) => bail!("parameter `{}` does not belong to family `{}`", p, self.family()),
        }
        Ok(s)
    }

    fn scale_density(&mut self, k: f64) -> Result<()> {
        match self {
            DatumSpec::Disk { height, .. }
            | DatumSpec::Annulus { height, .. }
            | DatumSpec::PolyGaussian { height, .. }
            | DatumSpec::DiffGaussians { height, .. } => *height *= k,
            DatumSpec::RadialProfile { values, .. } => values.iter_mut().for_each(|v| *v *= k),
            DatumSpec::Gaussian { mass, .. } => *mass *= k,
            DatumSpec::Grid { .. } => bail!("mass sweeps are not supported for grid data"),
        }
        Ok(())
    }
}

fn load_grid_values(path: &Path, rows: usize, cols: usize) -> Result<Vec<f64>> {
    let is_bin = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bin"));
    if is_bin {
        let bytes = fs::read(path).with_context(|| format!("cannot read grid file {}", path.display()))?;
        if bytes.len() != rows * cols * 8 {
            bail!("grid file {} has {} bytes, expected {} for {}x{} f64 values", path.display(), bytes.len(), rows * cols * 8, rows, cols);
        }
        return Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk"))).collect());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read grid file {}", path.display()))?;
    let mut values = Vec::with_capacity(rows * cols);
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: line {}", path.display(), i + 1))?;
        if rec.len() != cols {
            bail!("{}: line {} has {} values, expected {}", path.display(), i + 1, rec.len(), cols);
        }
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .with_context(|| format!("{}: line {} column {}: `{}` is not a number", path.display(), i + 1, j + 1, field))?;
            values.push(v);
        }
    }
    if values.len() != rows * cols {
        bail!("{}: found {} rows, expected {}", path.display(), values.len() / cols.max(1), rows);
    }
    Ok(values)
}
