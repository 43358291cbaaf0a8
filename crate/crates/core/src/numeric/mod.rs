pub mod optimize;
pub mod quadrature;
pub mod roots;
pub mod special;

pub use optimize::{compass_search, golden_section, grid_then_golden, Minimum, PlaneSearch};
pub use quadrature::{integrate, QuadConfig, QuadResult};
pub use roots::{bisect_predicate, solve_increasing, Root};
