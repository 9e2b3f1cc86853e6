//! Seeded random band-limited fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::field::{ScalarField, VectorField};
use super::grid::Grid;
use super::norms::{l2_norm, vector_l2_norm};
use super::ops::perp_gradient;

/// Shape of a random field: modes 0 < |k| <= `kmax` with amplitude
/// proportional to |k|^-`decay`, rescaled to root-mean-square `rms`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomSpec {
    pub kmax: f64,
    pub decay: f64,
    pub rms: f64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            kmax: 6.0,
            decay: 1.0,
            rms: 1.0,
        }
    }
}

fn raw_coefficients<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, spec: &RandomSpec) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); grid.len()];
    let ksq = grid.ksq();
    let nyq = grid.nyquist();
    let kmax2 = spec.kmax * spec.kmax;
    for idx in 1..grid.len() {
        let partner = grid.conj_index(idx);
        if partner < idx || ksq[idx] > kmax2 || nyq[idx] {
            continue;
        }
        let amp = ksq[idx].sqrt().powf(-spec.decay) * rng.gen_range(0.5..1.5);
        let phase = rng.gen_range(0.0..2.0 * PI);
        let z = Complex64::from_polar(amp, phase);
        c[idx] = z;
        c[partner] = z.conj();
    }
    c
}

/// Mean-free random scalar field.
pub fn random_scalar<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, spec: &RandomSpec) -> ScalarField {
    let f = ScalarField::from_coefficients(grid, raw_coefficients(grid, rng, spec))
        .expect("length matches");
    let norm = l2_norm(&f) / (2.0 * PI);
    if norm == 0.0 {
        return f;
    }
    f.scale(spec.rms / norm).into_physical()
}

/// Random divergence-free, mean-free vector field (rotated gradient of a
/// random stream function), normalised to root-mean-square speed `rms`.
pub fn random_solenoidal<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, spec: &RandomSpec) -> VectorField {
    let shape = RandomSpec {
        decay: spec.decay + 1.0,
        ..*spec
    };
    let psi = ScalarField::from_coefficients(grid, raw_coefficients(grid, rng, &shape))
        .expect("length matches");
    let u = perp_gradient(&psi);
    let norm = vector_l2_norm(&u) / (2.0 * PI);
    if norm == 0.0 {
        return u;
    }
    u.scale(spec.rms / norm).to_physical()
}

/// Random vector field without any constraint.
pub fn random_vector<R: Rng + ?Sized>(grid: &Grid, rng: &mut R, spec: &RandomSpec) -> VectorField {
    VectorField::new(random_scalar(grid, rng, spec), random_scalar(grid, rng, spec))
        .expect("components share the grid")
}
