//! Weak-form residuals of the mass and momentum equations over a trajectory,
//! and the finite-difference residual of the vorticity form.

use super::run::Trajectory;
use crate::error::{Error, Result};
use crate::spectral::norms::{hs_norm, inner, vector_inner};
use crate::spectral::ops::{curl, divergence, gradient, laplacian, perp_gradient};
use crate::spectral::{ScalarField, VectorField};
use crate::windows::{trapezoid, TimeProfile};

/// Space-time test function phi(x) w(t).
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub phi: ScalarField,
    pub profile: TimeProfile,
}

impl TestFunction {
    pub fn new(phi: ScalarField, profile: TimeProfile) -> Self {
        TestFunction { phi, profile }
    }
}

fn check_support(traj: &Trajectory, tf: &TestFunction) -> Result<()> {
    let (a, b) = tf.profile.support();
    let t_end = traj.last().t;
    if a < -1e-12 || b > t_end + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "test function supported on [{a}, {b}], outside [0, {t_end}]"
        )));
    }
    if traj.snapshots.first().map_or(true, |s| s.t != 0.0) {
        return Err(Error::InvalidArgument(
            "trajectory does not start at t = 0".into(),
        ));
    }
    Ok(())
}

/// -int int (rho d_t phi + rho u . grad phi) - int rho_0 phi(0).
pub fn weak_residual_mass(traj: &Trajectory, tf: &TestFunction) -> Result<f64> {
    check_support(traj, tf)?;
    let grad = gradient(&tf.phi).to_physical();
    let phi = tf.phi.to_physical();
    let times = traj.times();
    let integrand: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| {
            let w = tf.profile.value(s.t);
            let dw = tf.profile.derivative(s.t);
            if w == 0.0 && dw == 0.0 {
                return 0.0;
            }
            let flux = s.u.scale_by(&s.rho);
            dw * inner(&s.rho, &phi) + w * vector_inner(&flux, &grad)
        })
        .collect();
    let s0 = &traj.snapshots[0];
    Ok(-trapezoid(&times, &integrand) - tf.profile.value(0.0) * inner(&s0.rho, &phi))
}

/// Residual of the momentum equation tested with psi = w(t) grad^perp phi:
/// -int int [rho u . d_t psi + rho u (x) u : grad psi - (1/eps) rho u^perp . psi
/// - nu u . Lap psi] - int rho_0 u_0 . psi(0).
pub fn weak_residual_momentum(traj: &Trajectory, tf: &TestFunction) -> Result<f64> {
    check_support(traj, tf)?;
    let psi = perp_gradient(&tf.phi).to_physical();
    let lap_psi = psi.map_components(laplacian).to_physical();
    let g1 = gradient(psi.x1()).to_physical();
    let g2 = gradient(psi.x2()).to_physical();
    let times = traj.times();
    let eps = traj.epsilon;
    let nu = traj.nu;
    let integrand: Vec<f64> = traj
        .snapshots
        .iter()
        .map(|s| {
            let w = tf.profile.value(s.t);
            let dw = tf.profile.derivative(s.t);
            if w == 0.0 && dw == 0.0 {
                return 0.0;
            }
            let m = s.u.scale_by(&s.rho);
            // rho u_i u_j d_j psi_i
            let stress = VectorField::new(m.x1().pointwise_mul(s.u.x1()), m.x1().pointwise_mul(s.u.x2()))
                .expect("same grid");
            let stress2 = VectorField::new(m.x2().pointwise_mul(s.u.x1()), m.x2().pointwise_mul(s.u.x2()))
                .expect("same grid");
            let convective = vector_inner(&stress, &g1) + vector_inner(&stress2, &g2);
            let coriolis = vector_inner(&m.perp(), &psi) / eps;
            let viscous = vector_inner(&s.u, &lap_psi) * nu;
            dw * vector_inner(&m, &psi) + w * (convective - coriolis + viscous)
        })
        .collect();
    let s0 = &traj.snapshots[0];
    let m0 = s0.u.scale_by(&s0.rho);
    Ok(-trapezoid(&times, &integrand) - tf.profile.value(0.0) * vector_inner(&m0, &psi))
}

/// Spatial parts of the standard bank: unit-amplitude low modes.
pub fn standard_phis(grid: &crate::spectral::Grid) -> Vec<ScalarField> {
    vec![
        ScalarField::from_fn(grid, |_, y| y.cos()),
        ScalarField::from_fn(grid, |x, _| x.sin()),
        ScalarField::from_fn(grid, |x, y| (x + y).cos()),
        ScalarField::from_fn(grid, |x, y| (2.0 * x - y).sin()),
    ]
}

/// Standard test-function bank: each spatial mode of [`standard_phis`] times
/// a profile touching t = 0 and a centred bump.
pub fn standard_bank(traj: &Trajectory) -> Vec<TestFunction> {
    let t_end = traj.last().t;
    let profiles = [
        TimeProfile::Initial { width: 0.5 * t_end },
        TimeProfile::Bump {
            center: 0.5 * t_end,
            half_width: 0.5 * t_end,
        },
    ];
    standard_phis(traj.grid())
        .into_iter()
        .flat_map(|phi| profiles.iter().map(move |&p| TestFunction::new(phi.clone(), p)))
        .collect()
}

/// Largest |residual| of both weak forms over the standard bank.
pub fn bank_residuals(traj: &Trajectory) -> Result<(f64, f64)> {
    let mut mass = 0.0_f64;
    let mut momentum = 0.0_f64;
    for tf in standard_bank(traj) {
        mass = mass.max(weak_residual_mass(traj, &tf)?.abs());
        momentum = momentum.max(weak_residual_momentum(traj, &tf)?.abs());
    }
    Ok((mass, momentum))
}

/// Residual of d_t(eta - sigma) = curl f between consecutive snapshots: the
/// difference quotient of eta - sigma against the mean of curl f at both
/// ends, measured in H^{-2}. One value per snapshot pair.
pub fn vorticity_form_residual(traj: &Trajectory) -> Vec<f64> {
    let fields: Vec<(f64, ScalarField, ScalarField)> = (0..traj.snapshots.len())
        .map(|i| {
            let d = traj.derived(i);
            (traj.snapshots[i].t, &d.eta - &d.sigma, curl(&d.force))
        })
        .collect();
    fields
        .windows(2)
        .map(|w| {
            let (ta, qa, fa) = &w[0];
            let (tb, qb, fb) = &w[1];
            let dq = &(qb - qa) * (1.0 / (tb - ta));
            let favg = &(fa + fb) * 0.5;
            hs_norm(&(&dq - &favg), -2.0)
        })
        .collect()
}

/// L^2 norm of div u at every snapshot.
pub fn divergence_series(traj: &Trajectory) -> Vec<f64> {
    traj.snapshots
        .iter()
        .map(|s| crate::spectral::norms::l2_norm(&divergence(&s.u)))
        .collect()
}
