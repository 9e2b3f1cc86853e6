use std::f64::consts::PI;

use super::field::{ScalarField, VectorField};

/// Grid (trapezoidal) inner product, exact for band-limited products.
pub fn inner(a: &ScalarField, b: &ScalarField) -> f64 {
    a.assert_same_grid(b);
    let (x, y) = (a.values(), b.values());
    a.grid().cell_area() * x.iter().zip(y.iter()).map(|(p, q)| p * q).sum::<f64>()
}

pub fn vector_inner(u: &VectorField, v: &VectorField) -> f64 {
    inner(u.x1(), v.x1()) + inner(u.x2(), v.x2())
}

/// L2 norm by grid quadrature.
pub fn l2_norm(f: &ScalarField) -> f64 {
    inner(f, f).sqrt()
}

/// L2 norm from the coefficients (Parseval).
pub fn l2_norm_spectral(f: &ScalarField) -> f64 {
    2.0 * PI * f.coefficients().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vector_l2_norm(u: &VectorField) -> f64 {
    vector_inner(u, u).sqrt()
}

/// Lp norm by grid quadrature; `p = f64::INFINITY` gives the maximum.
pub fn lp_norm(f: &ScalarField, p: f64) -> f64 {
    let v = f.values();
    if p.is_infinite() {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let s: f64 = v.iter().map(|x| x.abs().powf(p)).sum();
    (f.grid().cell_area() * s).powf(1.0 / p)
}

/// Lp norm of the pointwise magnitude of a vector field.
pub fn vector_lp_norm(u: &VectorField, p: f64) -> f64 {
    lp_norm(&u.magnitude(), p)
}

/// Inhomogeneous Sobolev norm with weight (1 + |k|^2)^s.
pub fn hs_norm(f: &ScalarField, s: f64) -> f64 {
    let ksq = f.grid().ksq();
    let sum: f64 = f
        .coefficients()
        .iter()
        .zip(ksq)
        .map(|(z, &k2)| (1.0 + k2).powf(s) * z.norm_sqr())
        .sum();
    2.0 * PI * sum.sqrt()
}

pub fn vector_hs_norm(u: &VectorField, s: f64) -> f64 {
    hs_norm(u.x1(), s).hypot(hs_norm(u.x2(), s))
}

/// Homogeneous Sobolev norm with weight |k|^{2s}; the mean is ignored.
pub fn hdot_norm(f: &ScalarField, s: f64) -> f64 {
    let ksq = f.grid().ksq();
    let sum: f64 = f
        .coefficients()
        .iter()
        .zip(ksq)
        .skip(1)
        .map(|(z, &k2)| k2.powf(s) * z.norm_sqr())
        .sum();
    2.0 * PI * sum.sqrt()
}

pub fn vector_hdot_norm(u: &VectorField, s: f64) -> f64 {
    hdot_norm(u.x1(), s).hypot(hdot_norm(u.x2(), s))
}
