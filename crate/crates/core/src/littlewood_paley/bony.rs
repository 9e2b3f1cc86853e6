//! Bony decomposition of grid products.
//!
//! Products are plain grid products without dealiasing, so the identity
//! T_u v + T_v u + R(u, v) = u v holds pointwise up to rounding.

use super::dyadic::DyadicDecomposition;
use crate::spectral::ScalarField;

fn physical_blocks(dec: &DyadicDecomposition, u: &ScalarField) -> Vec<Vec<f64>> {
    dec.blocks(u).into_iter().map(|b| b.into_values()).collect()
}

fn accumulate(acc: &mut [f64], a: &[f64], b: &[f64]) {
    for ((s, x), y) in acc.iter_mut().zip(a).zip(b) {
        *s += x * y;
    }
}

/// T_u v = sum_j S_{j-1} u Delta_j v.
pub fn paraproduct(dec: &DyadicDecomposition, u: &ScalarField, v: &ScalarField) -> ScalarField {
    u.assert_same_grid(v);
    let vb = physical_blocks(dec, v);
    let mut acc = vec![0.0; dec.grid().len()];
    // S_{j-1} vanishes for j <= 0
    for j in 1..=dec.j_max() {
        let low = dec.low_pass(u, j - 1).into_values();
        accumulate(&mut acc, &low, &vb[(j + 1) as usize]);
    }
    ScalarField::from_values(dec.grid(), acc).expect("length matches")
}

/// R(u, v) = sum over |j - j'| <= 1 of Delta_j u Delta_j' v.
pub fn remainder(dec: &DyadicDecomposition, u: &ScalarField, v: &ScalarField) -> ScalarField {
    u.assert_same_grid(v);
    let ub = physical_blocks(dec, u);
    let vb = physical_blocks(dec, v);
    let nb = ub.len();
    let mut acc = vec![0.0; dec.grid().len()];
    for a in 0..nb {
        for b in a.saturating_sub(1)..(a + 2).min(nb) {
            accumulate(&mut acc, &ub[a], &vb[b]);
        }
    }
    ScalarField::from_values(dec.grid(), acc).expect("length matches")
}

/// The three pieces of the decomposition of u v.
#[derive(Clone, Debug)]
pub struct Bony {
    pub t_uv: ScalarField,
    pub t_vu: ScalarField,
    pub remainder: ScalarField,
}

impl Bony {
    pub fn new(dec: &DyadicDecomposition, u: &ScalarField, v: &ScalarField) -> Self {
        Bony {
            t_uv: paraproduct(dec, u, v),
            t_vu: paraproduct(dec, v, u),
            remainder: remainder(dec, u, v),
        }
    }

    pub fn sum(&self) -> ScalarField {
        &(&self.t_uv + &self.t_vu) + &self.remainder
    }
}
