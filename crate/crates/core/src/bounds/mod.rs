//! Upper and lower bounds on the critical time `T*_c(n₀)`, and the report
//! that collects them.

mod constants;
mod estimators;
mod fmethod;
mod lower;
mod report;
mod search;

pub use constants::{c0, conjugate, heat_constant, kappa, p0, MassConstants};
pub use estimators::{
    omega_convolution, tc1_bound, tc1_objective, tc2_rho_objective, tc2_bound, tc2_rho_form, tc2_theta_form, tc3_bound, tc4_bound, tc_at, tc_bound,
    virial_bound, CriticalTime, Tc1, Tc2, Tc3, Tc4,
};
pub use fmethod::{f_method_bound, FMethod, FMethodCase, FMethodState};
pub use lower::{lower_bound, lower_sup_form, LowerBound, LowerRegime};
pub use report::{
    full_report, ordering_violations, selected_report, BoundEstimate, BoundKind, BoundReport, OrderingViolation, Status,
};
pub use search::{minimize_over_centers, BoundConfig, SearchCertificate, SearchMethod};

/// `M`, `L`, `a` and `ln(1/a)` for mass `M`.
pub fn mass_constants<S: crate::Scalar>(mass: S) -> crate::Result<MassConstants<S>> {
    MassConstants::new(mass)
}
