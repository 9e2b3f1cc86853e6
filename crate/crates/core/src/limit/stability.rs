use super::hom::{run_hom_limit, HomLimitState, HomTrajectory};
use crate::error::Result;
use crate::spectral::norms::{l2_norm, vector_hs_norm};
use crate::spectral::{ScalarField, VectorField};

/// Budget for sup_t(||dr||^2 + ||du||_{H^1}^2) / (||dr_0||^2 + ||du_0||_{H^1}^2).
pub const STABILITY_BUDGET: f64 = 1e4;
/// Allowed relative deviation of the response to a halved perturbation from 1/2.
pub const LINEAR_RESPONSE_TOLERANCE: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwinReport {
    /// sup_t (||dr||^2 + ||du||_{H^1}^2)
    pub numerator: f64,
    /// ||dr_0||^2 + ||du_0||_{H^1}^2
    pub data: f64,
    /// numerator / data (0 for identical data)
    pub ratio: f64,
    pub budget: f64,
    /// Final perturbation size for the halved data over that for the full data.
    pub response: f64,
    pub linear: bool,
    pub pass: bool,
}

fn distance_sq(a: &HomLimitState, b: &HomLimitState) -> f64 {
    l2_norm(&(&a.r - &b.r)).powi(2) + vector_hs_norm(&(&a.u - &b.u), 1.0).powi(2)
}

fn sup_distance(a: &HomTrajectory, b: &HomTrajectory) -> f64 {
    a.snapshots
        .iter()
        .zip(&b.snapshots)
        .map(|(x, y)| distance_sq(x, y))
        .fold(0.0, f64::max)
}

/// Runs the base data, the perturbed data and the data with half the
/// perturbation to time `steps * dt`.
pub fn stability_twin_test(
    base: &HomLimitState,
    delta_r: &ScalarField,
    delta_u: &VectorField,
    nu: f64,
    dt: f64,
    steps: usize,
) -> Result<TwinReport> {
    let perturbed = |s: f64| {
        HomLimitState::new(&(&base.r + &(delta_r * s)), &(&base.u + &(delta_u * s)))
    };
    let a = HomLimitState::new(&base.r, &base.u);
    let (b, c) = (perturbed(1.0), perturbed(0.5));
    let every = steps.max(1);
    let ta = run_hom_limit(&a, nu, dt, steps, 1)?;
    let tb = run_hom_limit(&b, nu, dt, steps, 1)?;
    let tc = run_hom_limit(&c, nu, dt, steps, every)?;
    let data = distance_sq(&a, &b);
    let numerator = sup_distance(&ta, &tb);
    let ratio = if data > 0.0 { numerator / data } else { 0.0 };
    let full = distance_sq(ta.last(), tb.last()).sqrt();
    let half = distance_sq(ta.last(), tc.last()).sqrt();
    let (response, linear) = if full > 0.0 {
        let r = half / full;
        (r, (r / 0.5 - 1.0).abs() <= LINEAR_RESPONSE_TOLERANCE)
    } else {
        (0.0, half == 0.0)
    };
    Ok(TwinReport {
        numerator,
        data,
        ratio,
        budget: STABILITY_BUDGET,
        response,
        linear,
        pass: linear && ratio <= STABILITY_BUDGET,
    })
}
