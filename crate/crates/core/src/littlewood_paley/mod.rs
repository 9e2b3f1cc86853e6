//! Littlewood-Paley toolbox on the discrete torus: dyadic blocks, Besov and
//! Sobolev norms, the Bony decomposition, and checks of the classical
//! inequalities (Bernstein, commutator, Gagliardo-Nirenberg, products).

pub mod bony;
pub mod checks;
mod dyadic;
pub mod norms;
pub mod suite;

pub use bony::{paraproduct, remainder, Bony};
pub use checks::{
    bernstein_check, commutator_low_pass, gagliardo_nirenberg_check, BernsteinReport,
    GagliardoNirenbergReport,
};
pub use dyadic::{chi, DyadicDecomposition};
pub use norms::{besov_norm, sobolev_norm, BesovIndex, SobolevNorms};
