use super::dyadic::DyadicDecomposition;
use crate::error::{Error, Result};
use crate::spectral::norms::{l2_norm, lp_norm, vector_l2_norm};
use crate::spectral::ops::{gradient, MEAN_TOLERANCE};
use crate::spectral::ScalarField;

/// Constant in the two-sided Bernstein inequality.
pub const BERNSTEIN_CONSTANT: f64 = 4.0;

/// [S_M, a] f = S_M(a f) - a S_M f, with grid products.
pub fn commutator_low_pass(
    dec: &DyadicDecomposition,
    a: &ScalarField,
    f: &ScalarField,
    m: i32,
) -> ScalarField {
    let af = a.pointwise_mul(f);
    let smf = dec.low_pass(f, m);
    &dec.low_pass(&af, m) - &a.pointwise_mul(&smf)
}

/// Annulus `2^{j-1} <= |k| <= 2^{j+1}` used by the Bernstein check.
pub fn bernstein_annulus(j: i32) -> (f64, f64) {
    (2f64.powi(j - 1), 2f64.powi(j + 1))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BernsteinReport {
    pub j: i32,
    /// ||grad u|| / (2^j ||u||)
    pub ratio: f64,
    pub constant: f64,
    pub holds: bool,
}

/// Checks C^-1 2^j ||u|| <= ||grad u|| <= C 2^j ||u|| for u supported in the
/// annulus of [`bernstein_annulus`].
pub fn bernstein_check(u: &ScalarField, j: i32) -> Result<BernsteinReport> {
    if j < 0 {
        return Err(Error::InvalidArgument(format!(
            "Bernstein check needs j >= 0, got {j}"
        )));
    }
    let (lo, hi) = bernstein_annulus(j);
    let coeffs = u.coefficients();
    let peak = coeffs.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return Err(Error::InvalidArgument("Bernstein check of the zero field".into()));
    }
    let ksq = u.grid().ksq();
    let nyq = u.grid().nyquist();
    for (idx, z) in coeffs.iter().enumerate() {
        let k = ksq[idx].sqrt();
        let inside = k >= lo - 1e-12 && k <= hi + 1e-12 && !nyq[idx];
        if !inside && z.norm() > 1e-12 * peak {
            let (k1, k2) = u.grid().wavevector(idx);
            return Err(Error::InvalidArgument(format!(
                "mode ({k1}, {k2}) lies outside the annulus [{lo}, {hi}] of block {j}"
            )));
        }
    }
    let ratio = vector_l2_norm(&gradient(u)) / (2f64.powi(j) * l2_norm(u));
    let c = BERNSTEIN_CONSTANT;
    Ok(BernsteinReport {
        j,
        ratio,
        constant: c,
        holds: ratio >= 1.0 / c && ratio <= c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GagliardoNirenbergReport {
    pub p: f64,
    pub lambda: f64,
    pub lp: f64,
    pub l2: f64,
    pub grad_l2: f64,
    /// ||u||_{L^p} / (||u||^{1-lambda} ||grad u||^lambda)
    pub constant: f64,
}

/// Exponent lambda = d (p - 2) / (2 p) in dimension d = 2.
pub fn gn_exponent(p: f64) -> f64 {
    (p - 2.0) / p
}

/// Empirical constant of ||u||_{L^p} <= C ||u||^{1-lambda} ||grad u||^lambda.
pub fn gagliardo_nirenberg_check(u: &ScalarField, p: f64) -> Result<GagliardoNirenbergReport> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Gagliardo-Nirenberg check needs 2 < p < inf, got {p}"
        )));
    }
    let scale = u.max_abs().max(f64::MIN_POSITIVE);
    if u.mean().abs() > MEAN_TOLERANCE * scale.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "Gagliardo-Nirenberg check needs a mean-free field, mean is {:.3e}",
            u.mean()
        )));
    }
    let l2 = l2_norm(u);
    if l2 == 0.0 {
        return Err(Error::InvalidArgument(
            "Gagliardo-Nirenberg check of the zero field".into(),
        ));
    }
    let lambda = gn_exponent(p);
    let lp = lp_norm(u, p);
    let grad_l2 = vector_l2_norm(&gradient(u));
    Ok(GagliardoNirenbergReport {
        p,
        lambda,
        lp,
        l2,
        grad_l2,
        constant: lp / (l2.powf(1.0 - lambda) * grad_l2.powf(lambda)),
    })
}
