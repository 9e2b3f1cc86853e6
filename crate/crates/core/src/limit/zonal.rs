//! Zonal reference density: constraint geometry, the eta-omega relation and
//! the zonally averaged limit equation d_t <eta - sigma> = nu d_2^2 <omega>.

use crate::error::{Error, Result};
use crate::nsc::Trajectory;
use crate::spectral::norms::{hs_norm, l2_norm, vector_l2_norm};
use crate::spectral::ops::{curl, derivative, divergence, gradient, inverse_laplacian, Axis};
use crate::spectral::{Grid, ScalarField, VectorField};
use crate::windows::TimeProfile;

/// Coefficients with k1 != 0 below this fraction of the peak count as zero.
const ZONAL_TOLERANCE: f64 = 1e-12;

/// eta = -div(rho_0 grad (-Lap)^{-1} omega).
pub fn eta_from_omega(omega: &ScalarField, rho0: &ScalarField) -> Result<ScalarField> {
    // (-Lap)^{-1} omega = -Lap^{-1} omega
    let psi = inverse_laplacian(omega)?;
    let flux = gradient(&psi).scale_by(rho0);
    Ok(divergence(&flux))
}

/// Average over x1, as an x2-profile of length n.
pub fn zonal_average(f: &ScalarField) -> Vec<f64> {
    let n = f.grid().n();
    let v = f.values();
    (0..n)
        .map(|j| v[j * n..(j + 1) * n].iter().sum::<f64>() / n as f64)
        .collect()
}

/// Field constant in x1 with the given x2-profile.
pub fn from_profile(grid: &Grid, profile: &[f64]) -> ScalarField {
    let n = grid.n();
    let values = (0..n * n).map(|idx| profile[idx / n]).collect();
    ScalarField::from_values(grid, values).expect("length matches")
}

/// Zonal part of a scalar: its x1-average.
pub fn zonal_part(f: &ScalarField) -> ScalarField {
    from_profile(f.grid(), &zonal_average(f))
}

/// Checks that rho_0 depends on x2 alone and is not constant.
pub fn check_zonal(rho0: &ScalarField) -> Result<()> {
    let c = rho0.coefficients();
    let grid = rho0.grid();
    let peak = c.iter().skip(1).fold(0.0_f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return Err(Error::InvalidArgument(
            "reference density is constant, not zonal".into(),
        ));
    }
    for (idx, z) in c.iter().enumerate() {
        let (k1, k2) = grid.wavevector(idx);
        if k1 != 0 && z.norm() > ZONAL_TOLERANCE * peak {
            return Err(Error::InvalidArgument(format!(
                "reference density is not zonal: mode ({k1}, {k2}) is present"
            )));
        }
    }
    Ok(())
}

/// Zonal shear part (<u_1>(x2), 0): the intersection of div u = 0 and
/// div(rho_0 u) = 0 for a zonal rho_0 with non-degenerate critical points.
pub fn zonal_project(u: &VectorField, rho0: &ScalarField) -> Result<VectorField> {
    check_zonal(rho0)?;
    VectorField::new(zonal_part(u.x1()), ScalarField::zeros(u.grid()))
}

/// ||u - zonal_project(u)||^2 / ||u||^2 (0 for the zero field).
pub fn non_zonal_fraction(u: &VectorField) -> f64 {
    let total = vector_l2_norm(u).powi(2);
    if total == 0.0 {
        return 0.0;
    }
    let z = VectorField::new(zonal_part(u.x1()), ScalarField::zeros(u.grid())).expect("same grid");
    vector_l2_norm(&(u - &z)).powi(2) / total
}

#[derive(Clone, Debug)]
pub struct ZonalDiagnostics {
    pub mean_u1: Vec<f64>,
    pub mean_omega: Vec<f64>,
    pub mean_eta_minus_sigma: Vec<f64>,
    pub non_zonal_fraction: f64,
    /// ||u . grad rho_0||_{L^2}
    pub constraint_residual: f64,
}

impl ZonalDiagnostics {
    pub fn of_snapshot(traj: &Trajectory, i: usize) -> Result<Self> {
        check_zonal(&traj.rho_ref)?;
        let s = &traj.snapshots[i];
        let d = traj.derived(i);
        Ok(ZonalDiagnostics {
            mean_u1: zonal_average(s.u.x1()),
            mean_omega: zonal_average(&d.omega),
            mean_eta_minus_sigma: zonal_average(&(&d.eta - &d.sigma)),
            non_zonal_fraction: non_zonal_fraction(&s.u),
            constraint_residual: l2_norm(&s.u.dot(&gradient(&traj.rho_ref))),
        })
    }
}

/// Residual of the zonally averaged limit equation against each window:
/// the x2-profile -int w' <eta - sigma> dt - nu int w d_2^2 <omega> dt with
/// unit-mass windows, reported in H^{-2}.
///
/// Zonal test functions annihilate the term carried by the measure in the
/// limit system, so no reconstruction of it is needed.
pub fn zonal_limit_residual(traj: &Trajectory, windows: &[TimeProfile]) -> Result<Vec<f64>> {
    check_zonal(&traj.rho_ref)?;
    let grid = traj.grid();
    let n = grid.n();
    let times = traj.times();
    let weights = crate::windows::trapezoid_weights(&times);
    let profiles: Vec<(Vec<f64>, Vec<f64>)> = (0..traj.snapshots.len())
        .map(|i| {
            let d = traj.derived(i);
            let q = zonal_average(&(&d.eta - &d.sigma));
            let w2 = zonal_average(&derivative(&derivative(&d.omega, Axis::X2), Axis::X2));
            (q, w2)
        })
        .collect();
    Ok(windows
        .iter()
        .map(|win| {
            let mass = win.integral();
            let mut acc = vec![0.0; n];
            for (i, (q, w2)) in profiles.iter().enumerate() {
                let (v, dv) = (win.value(times[i]), win.derivative(times[i]));
                if v == 0.0 && dv == 0.0 {
                    continue;
                }
                for j in 0..n {
                    acc[j] -= weights[i] * (dv * q[j] + traj.nu * v * w2[j]) / mass;
                }
            }
            hs_norm(&from_profile(grid, &acc), -2.0)
        })
        .collect())
}

/// curl(rho_0 u) for comparison with [`eta_from_omega`].
pub fn momentum_vorticity(u: &VectorField, rho0: &ScalarField) -> ScalarField {
    curl(&u.scale_by(rho0))
}
