//! Upper and lower bounds on the blow-up critical time of the planar
//! parabolic-elliptic Patlak-Keller-Segel system with supercritical mass.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod datum;
pub mod error;
pub mod geometry;
pub mod heatmass;
pub mod numeric;
pub mod oracles;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{critical_mass, Scalar};

pub type Datum = datum::InitialDatum<f64>;
pub type Kind = datum::DatumKind<f64>;
pub type Grid = datum::CartesianGrid<f64>;
pub type Profile = datum::RadialProfile<f64>;
pub type Point = geometry::Point<f64>;
pub type Config = bounds::BoundConfig<f64>;
pub type Report = bounds::BoundReport<f64>;
pub type Estimate = bounds::BoundEstimate<f64>;
pub type Oracle = oracles::OracleResult<f64>;
