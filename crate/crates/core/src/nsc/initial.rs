use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::SimConfig;
use super::state::State;
use crate::error::{Error, Result};
use crate::spectral::ops::perp_gradient;
use crate::spectral::random::{random_scalar, random_solenoidal, RandomSpec};
use crate::kernel::Kernel;
use crate::spectral::{Grid, ScalarField, VectorField};

/// One real Fourier mode `cos * cos(k.x) + sin * sin(k.x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k1: i64,
    pub k2: i64,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

fn modes_field(grid: &Grid, mean: f64, modes: &[Mode]) -> ScalarField {
    ScalarField::from_fn(grid, |x, y| {
        mean + modes
            .iter()
            .map(|m| {
                let ph = m.k1 as f64 * x + m.k2 as f64 * y;
                m.cos * ph.cos() + m.sin * ph.sin()
            })
            .sum::<f64>()
    })
}

fn default_one() -> f64 {
    1.0
}

fn default_kmax() -> f64 {
    4.0
}

/// Reference density rho_0.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhoRef {
    /// rho_0 = 1.
    Constant,
    /// rho_0 = 2 + sin x2.
    Zonal,
    Custom {
        #[serde(default = "default_one")]
        mean: f64,
        #[serde(default)]
        modes: Vec<Mode>,
    },
}

impl Default for RhoRef {
    fn default() -> Self {
        RhoRef::Constant
    }
}

impl RhoRef {
    pub fn field(&self, grid: &Grid) -> ScalarField {
        match self {
            RhoRef::Constant => ScalarField::constant(grid, 1.0),
            RhoRef::Zonal => ScalarField::from_fn(grid, |_, y| 2.0 + y.sin()),
            RhoRef::Custom { mean, modes } => modes_field(grid, *mean, modes),
        }
    }

    pub fn is_zonal(&self) -> bool {
        matches!(self, RhoRef::Zonal)
    }
}

/// Density perturbation r_0 (rho = rho_0 + epsilon r_0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarSpec {
    Zero,
    /// cos x1 + sin x2.
    Default,
    Modes {
        #[serde(default)]
        mean: f64,
        modes: Vec<Mode>,
    },
    Random {
        #[serde(default = "default_kmax")]
        kmax: f64,
        #[serde(default = "default_one")]
        decay: f64,
        #[serde(default = "default_one")]
        rms: f64,
    },
}

impl Default for ScalarSpec {
    fn default() -> Self {
        ScalarSpec::Default
    }
}

/// Initial velocity, Leray-projected when loaded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocitySpec {
    Rest,
    /// (a sin x2, 0).
    Shear {
        #[serde(default = "default_one")]
        amplitude: f64,
    },
    /// Projection of (sin x2 cos x1, 0) plus the unit shear.
    Default,
    /// grad^perp of the stream function given by `modes`.
    Stream { modes: Vec<Mode> },
    Random {
        #[serde(default = "default_kmax")]
        kmax: f64,
        #[serde(default = "default_one")]
        decay: f64,
        #[serde(default = "default_one")]
        rms: f64,
    },
}

impl Default for VelocitySpec {
    fn default() -> Self {
        VelocitySpec::Default
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSpec {
    pub rho_ref: RhoRef,
    pub r0: ScalarSpec,
    pub u0: VelocitySpec,
}

/// Level-set thresholds used for the non-degeneracy check of a zonal rho_0.
pub const CRITICAL_DELTAS: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Number of off-grid sample points used by [`critical_set_measure`].
pub const CRITICAL_SAMPLES: usize = 40_000;

/// Monte Carlo estimate of the fraction of the torus where |grad rho_0| <= delta.
///
/// The gradient is evaluated off the grid from the Fourier coefficients, so
/// grid points that happen to sit on critical lines do not bias the estimate.
pub fn critical_set_measure(rho0: &ScalarField, delta: f64) -> f64 {
    let grid = rho0.grid();
    let c = rho0.coefficients();
    let peak = c.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    let modes: Vec<(f64, f64, Complex64)> = c
        .iter()
        .enumerate()
        .filter(|(idx, z)| *idx != 0 && z.norm() > 1e-14 * peak)
        .map(|(idx, z)| {
            let (k1, k2) = grid.wavevector(idx);
            (k1 as f64, k2 as f64, *z)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut hits = 0usize;
    for _ in 0..CRITICAL_SAMPLES {
        let (x, y) = (rng.gen::<f64>() * two_pi, rng.gen::<f64>() * two_pi);
        let (mut g1, mut g2) = (0.0, 0.0);
        for &(k1, k2, z) in &modes {
            // Re(i k z e^{i k.x})
            let e = Complex64::from_polar(1.0, k1 * x + k2 * y);
            let v = -(z * e).im;
            g1 += k1 * v;
            g2 += k2 * v;
        }
        if (g1 * g1 + g2 * g2).sqrt() <= delta {
            hits += 1;
        }
    }
    hits as f64 / CRITICAL_SAMPLES as f64
}

/// Resolved initial fields on a grid.
#[derive(Clone, Debug)]
pub struct InitialData {
    pub rho_kind: RhoRef,
    pub rho_ref: ScalarField,
    pub r0: ScalarField,
    pub u0: VectorField,
}

impl InitialData {
    /// Builds the fields, drawing random data from a generator seeded with
    /// `seed`. Perturbation and velocity are truncated to the dealiased band
    /// and the velocity is projected onto divergence-free fields.
    pub fn from_spec(spec: &InitialSpec, grid: &Grid, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kernel = Kernel::new(grid, true);
        let rho_ref = spec.rho_ref.field(grid);
        let r0 = match &spec.r0 {
            ScalarSpec::Zero => ScalarField::zeros(grid),
            ScalarSpec::Default => ScalarField::from_fn(grid, |x, y| x.cos() + y.sin()),
            ScalarSpec::Modes { mean, modes } => modes_field(grid, *mean, modes),
            ScalarSpec::Random { kmax, decay, rms } => random_scalar(
                grid,
                &mut rng,
                &RandomSpec {
                    kmax: *kmax,
                    decay: *decay,
                    rms: *rms,
                },
            ),
        };
        let u0 = match &spec.u0 {
            VelocitySpec::Rest => VectorField::zeros(grid),
            VelocitySpec::Shear { amplitude } => {
                let a = *amplitude;
                VectorField::from_fn(grid, |_, y| (a * y.sin(), 0.0))
            }
            VelocitySpec::Default => {
                VectorField::from_fn(grid, |x, y| (y.sin() * x.cos() + y.sin(), 0.0))
            }
            VelocitySpec::Stream { modes } => perp_gradient(&modes_field(grid, 0.0, modes)),
            VelocitySpec::Random { kmax, decay, rms } => random_solenoidal(
                grid,
                &mut rng,
                &RandomSpec {
                    kmax: *kmax,
                    decay: *decay,
                    rms: *rms,
                },
            ),
        };
        let (a, b) = kernel.band_solenoidal(&u0);
        Ok(InitialData {
            rho_kind: spec.rho_ref.clone(),
            rho_ref,
            r0: kernel.scalar(kernel.band(&r0)).into_physical(),
            u0: kernel.vector(a, b).to_physical(),
        })
    }

    /// rho_{0,eps} = rho_0 + eps r_0 and the projected velocity, after
    /// checking the density floor and, for the zonal choice, non-degeneracy.
    pub fn assemble(&self, cfg: &SimConfig) -> Result<State> {
        let grid = self.rho_ref.grid();
        if grid.n() != cfg.n {
            return Err(Error::GridMismatch(format!(
                "initial data on {grid:?}, configuration asks for n = {}",
                cfg.n
            )));
        }
        if self.rho_kind.is_zonal() {
            self.check_non_degenerate()?;
        }
        let rho = &self.rho_ref + &(&self.r0 * cfg.epsilon);
        let min = rho.min();
        if min < cfg.density_floor {
            return Err(Error::config(format!(
                "initial density minimum {min:.6} lies below density_floor = {}",
                cfg.density_floor
            )));
        }
        Ok(State {
            rho,
            u: self.u0.clone(),
            t: 0.0,
        })
    }

    /// Sampled measure of {|grad rho_0| <= delta} must shrink with delta.
    pub fn check_non_degenerate(&self) -> Result<()> {
        let m: Vec<f64> = CRITICAL_DELTAS
            .iter()
            .map(|&d| critical_set_measure(&self.rho_ref, d))
            .collect();
        let shrinking = m.windows(2).all(|w| w[1] <= w[0]);
        if !shrinking || m[m.len() - 1] >= m[0] || m[m.len() - 1] > 0.01 {
            return Err(Error::config(format!(
                "reference density has degenerate critical set, sampled measures {m:?}"
            )));
        }
        Ok(())
    }
}
