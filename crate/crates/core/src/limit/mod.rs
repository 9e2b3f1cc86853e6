//! The two fast-rotation limits: the homogeneous system with the coupling
//! r u^perp, and the zonal vorticity limit.

pub mod apriori;
pub mod hom;
pub mod stability;
pub mod zonal;

pub use apriori::{h1_envelope, EnvelopeReport, H1_ENVELOPE_CONSTANT};
pub use hom::{
    coupling_work, hom_invariants, hom_limit_step, hom_limit_vorticity_residual, run_hom_limit,
    HomInvariants, HomLimitState, HomStepper, HomTrajectory,
};
pub use stability::{stability_twin_test, TwinReport, STABILITY_BUDGET};
pub use zonal::{
    check_zonal, eta_from_omega, from_profile, momentum_vorticity, non_zonal_fraction,
    zonal_average, zonal_limit_residual, zonal_part, zonal_project, ZonalDiagnostics,
};
