//! Distances between trajectories and per-run convergence diagnostics.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fit::{least_squares, LinearFit};
use crate::limit::{check_zonal, non_zonal_fraction};
use crate::nsc::Trajectory;
use crate::spectral::norms::{hs_norm, l2_norm, vector_l2_norm};
use crate::spectral::ops::gradient;
use crate::spectral::{ScalarField, VectorField};
use crate::windows::{trapezoid, trapezoid_weights, TimeProfile};

/// Default H^{-k} index for the density-fluctuation decay.
pub const S_DECAY_INDEX: f64 = 0.75;
/// Regularity of the uniform bound on sigma: H^{-2-delta} with delta = 1/2.
pub const SIGMA_BOUND_INDEX: f64 = -2.5;

fn check_sampling(ta: &[f64], tb: &[f64]) -> Result<()> {
    let same = ta.len() == tb.len()
        && ta
            .iter()
            .zip(tb)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * a.abs().max(1.0));
    if same && !ta.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "mismatched sampling: {} and {} snapshots",
            ta.len(),
            tb.len()
        )))
    }
}

/// (int_0^T ||a - b||^2 dt)^{1/2} by the trapezoidal rule.
pub fn metric_strong(a: &[(f64, &VectorField)], b: &[(f64, &VectorField)]) -> Result<f64> {
    let (ta, tb): (Vec<f64>, Vec<f64>) = (a.iter().map(|p| p.0).collect(), b.iter().map(|p| p.0).collect());
    check_sampling(&ta, &tb)?;
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| vector_l2_norm(&(x.1 - y.1)).powi(2))
        .collect();
    Ok(trapezoid(&ta, &d).max(0.0).sqrt())
}

/// Scalar counterpart of [`metric_strong`].
pub fn metric_strong_scalar(a: &[(f64, &ScalarField)], b: &[(f64, &ScalarField)]) -> Result<f64> {
    let (ta, tb): (Vec<f64>, Vec<f64>) = (a.iter().map(|p| p.0).collect(), b.iter().map(|p| p.0).collect());
    check_sampling(&ta, &tb)?;
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| l2_norm(&(x.1 - y.1)).powi(2))
        .collect();
    Ok(trapezoid(&ta, &d).max(0.0).sqrt())
}

/// Windows of unit mass: each profile divided by its integral.
fn unit_weights(times: &[f64], window: &TimeProfile) -> Vec<f64> {
    let q = trapezoid_weights(times);
    let mass = window.integral();
    times
        .iter()
        .zip(&q)
        .map(|(&t, &w)| w * window.value(t) / mass)
        .collect()
}

/// max over |k| <= kmax and windows w of |int (u_a(k, t) - u_b(k, t)) w(t) dt|,
/// with unit-mass windows and the Euclidean norm over the two components.
pub fn metric_weak(
    a: &[(f64, &VectorField)],
    b: &[(f64, &VectorField)],
    kmax: f64,
    windows: &[TimeProfile],
) -> Result<f64> {
    let (ta, tb): (Vec<f64>, Vec<f64>) = (a.iter().map(|p| p.0).collect(), b.iter().map(|p| p.0).collect());
    check_sampling(&ta, &tb)?;
    let grid = a[0].1.grid();
    let ksq = grid.ksq();
    let modes: Vec<usize> = (0..grid.len()).filter(|&i| ksq[i] <= kmax * kmax).collect();
    let diffs: Vec<(Vec<Complex64>, Vec<Complex64>)> = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x.1 - y.1;
            let (c1, c2) = (d.x1().coefficients(), d.x2().coefficients());
            (modes.iter().map(|&m| c1[m]).collect(), modes.iter().map(|&m| c2[m]).collect())
        })
        .collect();
    let mut worst = 0.0_f64;
    for w in windows {
        let q = unit_weights(&ta, w);
        for j in 0..modes.len() {
            let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for (i, (d1, d2)) in diffs.iter().enumerate() {
                s1 += d1[j] * q[i];
                s2 += d2[j] * q[i];
            }
            worst = worst.max((s1.norm_sqr() + s2.norm_sqr()).sqrt());
        }
    }
    Ok(worst)
}

/// Constant C with metric_weak <= C metric_strong on the given sampling:
/// max over windows of the discrete L^2 norm of the unit-mass window over 2 pi.
pub fn weak_strong_constant(times: &[f64], windows: &[TimeProfile]) -> f64 {
    let q = trapezoid_weights(times);
    windows
        .iter()
        .map(|w| {
            let mass = w.integral();
            let s: f64 = times
                .iter()
                .zip(&q)
                .map(|(&t, &qi)| qi * (w.value(t) / mass).powi(2))
                .sum();
            s.sqrt() / (2.0 * std::f64::consts::PI)
        })
        .fold(0.0, f64::max)
}

fn windowed_average<F>(traj: &Trajectory, window: &TimeProfile, f: F) -> VectorField
where
    F: Fn(&crate::nsc::State) -> VectorField,
{
    let q = unit_weights(&traj.times(), window);
    let mut acc = VectorField::zeros(traj.grid());
    for (s, &w) in traj.snapshots.iter().zip(&q) {
        if w != 0.0 {
            acc = &acc + &(&f(s) * w);
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstraintReport {
    /// max over windows of ||int w u . grad rho_0 dt||_{H^{-1}}
    pub windowed: f64,
    /// max over windows of the non-zonal energy fraction of int w u dt
    /// (zonal reference density only).
    pub non_zonal_fraction: Option<f64>,
}

pub fn metric_constraint(traj: &Trajectory, windows: &[TimeProfile]) -> ConstraintReport {
    let grad = gradient(&traj.rho_ref).to_physical();
    let zonal = check_zonal(&traj.rho_ref).is_ok();
    let mut windowed = 0.0_f64;
    let mut fraction = 0.0_f64;
    for w in windows {
        let avg = windowed_average(traj, w, |s| s.u.clone());
        let c = avg.dot(&grad);
        windowed = windowed.max(hs_norm(&c, -1.0));
        if zonal {
            fraction = fraction.max(non_zonal_fraction(&avg));
        }
    }
    ConstraintReport {
        windowed,
        non_zonal_fraction: zonal.then_some(fraction),
    }
}

/// sup_t ||sigma(t)||_{H^{-5/2}}.
pub fn metric_sigma_bound(traj: &Trajectory) -> f64 {
    traj.snapshots
        .iter()
        .map(|s| hs_norm(&(&(&s.rho - &traj.rho_ref) * (1.0 / traj.epsilon)), SIGMA_BOUND_INDEX))
        .fold(0.0, f64::max)
}

/// sup_t ||rho(t) - rho_0||_{H^{-k}}.
pub fn s_norm(traj: &Trajectory, k: f64) -> f64 {
    traj.snapshots
        .iter()
        .map(|s| hs_norm(&(&s.rho - &traj.rho_ref), -k))
        .fold(0.0, f64::max)
}

/// sup_t ||rho(t) - rho_0||_{H^{-k}} / eps^theta.
pub fn metric_s_decay(traj: &Trajectory, theta: f64, k: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "decay exponent theta = {theta} must lie in (0, 1)"
        )));
    }
    Ok(s_norm(traj, k) / traj.epsilon.powf(theta))
}

/// Least-squares slope of log(value) against log(eps).
pub fn fit_rate(epsilons: &[f64], values: &[f64]) -> Result<LinearFit> {
    if epsilons.len() != values.len() || epsilons.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "a rate needs at least 3 paired values, got {}",
            values.len().min(epsilons.len())
        )));
    }
    if values.iter().chain(epsilons).any(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument(
            "rates need positive finite values".into(),
        ));
    }
    let xs: Vec<f64> = epsilons.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    Ok(least_squares(&xs, &ys))
}
