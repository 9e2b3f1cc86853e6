//! Spectral differential operators.
//!
//! Every differentiation zeroes the Nyquist row and column, so all
//! derivative multipliers are odd or real-even and commute exactly.

use num_complex::Complex64;

use super::field::{ScalarField, VectorField};
use crate::error::{Error, Result};

/// Relative size of the mean below which a field counts as mean-free.
pub const MEAN_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
}

pub fn derivative(f: &ScalarField, axis: Axis) -> ScalarField {
    let grid = f.grid().clone();
    let nyq = grid.nyquist();
    f.apply_complex_multiplier(|idx| {
        if nyq[idx] {
            return Complex64::new(0.0, 0.0);
        }
        let (k1, k2) = grid.wavevector(idx);
        let k = match axis {
            Axis::X1 => k1,
            Axis::X2 => k2,
        };
        Complex64::new(0.0, k as f64)
    })
}

pub fn gradient(f: &ScalarField) -> VectorField {
    VectorField::new(derivative(f, Axis::X1), derivative(f, Axis::X2))
        .expect("components share the grid")
}

/// Rotated gradient (-d2 f, d1 f).
pub fn perp_gradient(f: &ScalarField) -> VectorField {
    VectorField::new(-&derivative(f, Axis::X2), derivative(f, Axis::X1))
        .expect("components share the grid")
}

pub fn divergence(u: &VectorField) -> ScalarField {
    &derivative(u.x1(), Axis::X1) + &derivative(u.x2(), Axis::X2)
}

/// Scalar curl d1 u2 - d2 u1.
pub fn curl(u: &VectorField) -> ScalarField {
    &derivative(u.x2(), Axis::X1) - &derivative(u.x1(), Axis::X2)
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    let grid = f.grid().clone();
    let (ksq, nyq) = (grid.ksq(), grid.nyquist());
    f.apply_multiplier(|idx| if nyq[idx] { 0.0 } else { -ksq[idx] })
}

/// Solves Delta g = f for mean-free g; fails if f has a non-negligible mean.
pub fn inverse_laplacian(f: &ScalarField) -> Result<ScalarField> {
    let c = f.coefficients();
    let scale = c.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    if c[0].norm() > MEAN_TOLERANCE * scale {
        return Err(Error::InvalidArgument(format!(
            "inverse Laplacian needs a mean-free field, mean is {:.3e}",
            c[0].re
        )));
    }
    let grid = f.grid().clone();
    let (ksq, nyq) = (grid.ksq(), grid.nyquist());
    Ok(f.apply_multiplier(|idx| {
        if idx == 0 || nyq[idx] {
            0.0
        } else {
            -1.0 / ksq[idx]
        }
    }))
}

/// Velocity with vorticity omega: u = grad^perp Delta^{-1} omega.
pub fn biot_savart(omega: &ScalarField) -> Result<VectorField> {
    Ok(perp_gradient(&inverse_laplacian(omega)?))
}

/// Helmholtz-Leray projection onto divergence-free fields. The mean is kept.
pub fn leray_project(u: &VectorField) -> VectorField {
    let grid = u.grid().clone();
    let a = u.x1().coefficients();
    let b = u.x2().coefficients();
    let (ksq, nyq) = (grid.ksq(), grid.nyquist());
    let mut pa = a.into_owned();
    let mut pb = b.into_owned();
    for idx in 1..grid.len() {
        if nyq[idx] {
            pa[idx] = Complex64::new(0.0, 0.0);
            pb[idx] = Complex64::new(0.0, 0.0);
            continue;
        }
        let (k1, k2) = grid.wavevector(idx);
        let (k1, k2) = (k1 as f64, k2 as f64);
        let kdu = (pa[idx] * k1 + pb[idx] * k2) / ksq[idx];
        pa[idx] -= kdu * k1;
        pb[idx] -= kdu * k2;
    }
    VectorField::new(
        ScalarField::from_coefficients(&grid, pa).expect("length matches"),
        ScalarField::from_coefficients(&grid, pb).expect("length matches"),
    )
    .expect("components share the grid")
}

/// Zeroes modes outside the two-thirds band.
pub fn dealias(f: &ScalarField) -> ScalarField {
    let keep = f.grid().resolved().to_vec();
    f.apply_multiplier(|idx| if keep[idx] { 1.0 } else { 0.0 })
}

pub fn dealias_vector(u: &VectorField) -> VectorField {
    u.map_components(dealias)
}

/// Pseudo-spectral product, optionally truncated to the two-thirds band.
pub fn product(a: &ScalarField, b: &ScalarField, truncate: bool) -> ScalarField {
    let p = a.pointwise_mul(b);
    if truncate {
        dealias(&p)
    } else {
        p
    }
}

/// Bessel potential (1 + |k|^2)^{s/2}; negative s smooths.
pub fn bessel_potential(f: &ScalarField, s: f64) -> ScalarField {
    let ksq = f.grid().ksq().to_vec();
    f.apply_multiplier(|idx| (1.0 + ksq[idx]).powf(0.5 * s))
}

/// Keeps only the modes with |k| <= kmax.
pub fn low_modes(f: &ScalarField, kmax: f64) -> ScalarField {
    let ksq = f.grid().ksq().to_vec();
    f.apply_multiplier(|idx| if ksq[idx] <= kmax * kmax { 1.0 } else { 0.0 })
}

/// Largest |k| carrying a coefficient above `tol` (0 for the zero field).
pub fn spectral_radius(f: &ScalarField, tol: f64) -> f64 {
    let c = f.coefficients();
    let ksq = f.grid().ksq();
    c.iter()
        .zip(ksq)
        .filter(|(z, _)| z.norm() > tol)
        .fold(0.0, |m, (_, &k2)| m.max(k2.sqrt()))
}
