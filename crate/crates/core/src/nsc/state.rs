use crate::spectral::ops::{curl, divergence, laplacian};
use crate::spectral::{ScalarField, VectorField};

/// Density, velocity and time of one instant of a run.
#[derive(Clone, Debug)]
pub struct State {
    pub rho: ScalarField,
    pub u: VectorField,
    pub t: f64,
}

/// Diagnostic fields built from a state and the reference density.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    /// (rho - rho_0) / epsilon
    pub sigma: ScalarField,
    /// rho u
    pub momentum: VectorField,
    /// curl(rho u)
    pub eta: ScalarField,
    /// curl u
    pub omega: ScalarField,
    /// -div(rho u (x) u) + nu Delta u
    pub force: VectorField,
}

/// -div(rho u (x) u) + nu Delta u.
pub fn momentum_force(rho: &ScalarField, u: &VectorField, nu: f64) -> VectorField {
    let m = u.scale_by(rho);
    let comp = |i: usize| {
        let flux = VectorField::new(m.comp(i).pointwise_mul(u.x1()), m.comp(i).pointwise_mul(u.x2()))
            .expect("same grid");
        &(&laplacian(u.comp(i)) * nu) - &divergence(&flux)
    };
    VectorField::new(comp(0), comp(1)).expect("same grid")
}

pub fn derived_fields(state: &State, rho_ref: &ScalarField, epsilon: f64, nu: f64) -> DerivedFields {
    let sigma = &(&state.rho - rho_ref) * (1.0 / epsilon);
    let momentum = state.u.scale_by(&state.rho);
    DerivedFields {
        sigma,
        eta: curl(&momentum),
        omega: curl(&state.u),
        force: momentum_force(&state.rho, &state.u, nu),
        momentum,
    }
}
