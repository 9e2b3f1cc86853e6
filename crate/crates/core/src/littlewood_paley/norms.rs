use super::dyadic::DyadicDecomposition;
use crate::error::{Error, Result};
use crate::spectral::norms::{hs_norm, l2_norm, lp_norm};
use crate::spectral::ScalarField;

/// Besov index (s, p, r) with p, r in [1, inf].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, r: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("r", r)] {
            if !(v >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "Besov exponent {name} = {v} must lie in [1, inf]"
                )));
            }
        }
        if !s.is_finite() {
            return Err(Error::InvalidArgument("Besov regularity must be finite".into()));
        }
        Ok(BesovIndex { s, p, r })
    }
}

/// The two Sobolev evaluators: direct spectral sum and dyadic sum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SobolevNorms {
    pub direct: f64,
    pub littlewood_paley: f64,
}

impl SobolevNorms {
    /// littlewood_paley / direct (1 for the zero field).
    pub fn ratio(&self) -> f64 {
        if self.direct == 0.0 {
            1.0
        } else {
            self.littlewood_paley / self.direct
        }
    }
}

fn ell_r(terms: impl Iterator<Item = f64>, r: f64) -> f64 {
    if r.is_infinite() {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|t| t.powf(r)).sum::<f64>().powf(1.0 / r)
    }
}

/// Sequence (2^{js} ||Delta_j u||_{L^p})_j.
pub fn besov_terms(dec: &DyadicDecomposition, u: &ScalarField, s: f64, p: f64) -> Vec<f64> {
    dec.indices()
        .zip(dec.blocks(u))
        .map(|(j, b)| 2f64.powf(j as f64 * s) * lp_norm(&b, p))
        .collect()
}

pub fn besov_norm(dec: &DyadicDecomposition, u: &ScalarField, idx: BesovIndex) -> f64 {
    ell_r(besov_terms(dec, u, idx.s, idx.p).into_iter(), idx.r)
}

pub fn sobolev_norm(dec: &DyadicDecomposition, u: &ScalarField, s: f64) -> SobolevNorms {
    let lp = dec
        .indices()
        .zip(dec.blocks(u))
        .map(|(j, b)| 4f64.powf(j as f64 * s) * l2_norm(&b).powi(2))
        .sum::<f64>()
        .sqrt();
    SobolevNorms {
        direct: hs_norm(u, s),
        littlewood_paley: lp,
    }
}
