use super::hom::HomTrajectory;
use crate::spectral::norms::{lp_norm, vector_l2_norm};
use crate::spectral::ops::gradient;

/// Frozen constant of the H^1 envelope
/// ||grad u(t)||^2 <= C (||grad u_0||^2 + T ||r_0||_inf^2 ||u_0||^2).
pub const H1_ENVELOPE_CONSTANT: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeReport {
    /// sup_t ||grad u(t)||^2 over the data term.
    pub ratio: f64,
    pub constant: f64,
    pub finite: bool,
    pub holds: bool,
}

fn grad_sq(u: &crate::spectral::VectorField) -> f64 {
    vector_l2_norm(&gradient(u.x1())).powi(2) + vector_l2_norm(&gradient(u.x2())).powi(2)
}

/// Compares the H^1 seminorm along a limit run with the envelope built from
/// the run's own initial data and final time.
pub fn h1_envelope(traj: &HomTrajectory) -> EnvelopeReport {
    let s0 = &traj.snapshots[0];
    let t_end = traj.last().t;
    let data = grad_sq(&s0.u)
        + t_end * lp_norm(&s0.r, f64::INFINITY).powi(2) * vector_l2_norm(&s0.u).powi(2);
    let sup = traj.snapshots.iter().map(|s| grad_sq(&s.u)).fold(0.0, f64::max);
    let ratio = if data > 0.0 { sup / data } else { 0.0 };
    EnvelopeReport {
        ratio,
        constant: H1_ENVELOPE_CONSTANT,
        finite: sup.is_finite(),
        holds: sup.is_finite() && ratio <= H1_ENVELOPE_CONSTANT,
    }
}
