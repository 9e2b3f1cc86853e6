use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Parameters of one simulation of the rotating variable-density system.
///
/// The time step is fixed for the whole run: the smallest of
/// `cfl * h / max|u0|`, `coriolis_fraction * epsilon` and `dt_max`, shrunk
/// so that an integer number of steps reaches `t_end`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub epsilon: f64,
    pub nu: f64,
    pub n: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub coriolis_fraction: f64,
    pub dt_max: Option<f64>,
    pub density_floor: f64,
    pub dealias: bool,
    pub elliptic_tol: f64,
    pub elliptic_max_iter: usize,
    pub hyperdiffusion: f64,
    pub seed: u64,
    pub snapshot_every: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            epsilon: 0.1,
            nu: 0.05,
            n: 64,
            t_end: 1.0,
            cfl: 0.4,
            coriolis_fraction: 0.5,
            dt_max: None,
            density_floor: 0.1,
            dealias: true,
            elliptic_tol: 1e-10,
            elliptic_max_iter: 500,
            hyperdiffusion: 0.0,
            seed: 0,
            snapshot_every: 1,
        }
    }
}

fn positive(key: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("{key} = {v} must be positive and finite")))
    }
}

impl SimConfig {
    /// Checks every invariant; `prefix` is prepended to key names in messages.
    pub fn validate_at(&self, prefix: &str) -> Result<()> {
        let key = |k: &str| format!("{prefix}{k}");
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::config(format!(
                "{} = {} must lie in (0, 1]",
                key("epsilon"),
                self.epsilon
            )));
        }
        positive(&key("nu"), self.nu)?;
        positive(&key("density_floor"), self.density_floor)?;
        positive(&key("cfl"), self.cfl)?;
        positive(&key("coriolis_fraction"), self.coriolis_fraction)?;
        positive(&key("elliptic_tol"), self.elliptic_tol)?;
        if let Some(d) = self.dt_max {
            positive(&key("dt_max"), d)?;
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config(format!(
                "{} = {} must be non-negative and finite",
                key("t_end"),
                self.t_end
            )));
        }
        if !(self.hyperdiffusion >= 0.0 && self.hyperdiffusion.is_finite()) {
            return Err(Error::config(format!(
                "{} = {} must be non-negative",
                key("hyperdiffusion"),
                self.hyperdiffusion
            )));
        }
        if self.elliptic_max_iter == 0 {
            return Err(Error::config(format!("{} must be at least 1", key("elliptic_max_iter"))));
        }
        if self.snapshot_every == 0 {
            return Err(Error::config(format!("{} must be at least 1", key("snapshot_every"))));
        }
        if self.n < 16 || !self.n.is_power_of_two() {
            return Err(Error::config(format!(
                "{} = {} must be a power of two, at least 16",
                key("n"),
                self.n
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_at("")
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n)
    }

    /// Fixed step and step count for a run whose initial velocity peaks at `umax`.
    pub fn time_step(&self, umax: f64) -> (f64, usize) {
        if self.t_end == 0.0 {
            return (0.0, 0);
        }
        let h = 2.0 * std::f64::consts::PI / self.n as f64;
        let mut dt = self.coriolis_fraction * self.epsilon;
        if umax > 0.0 {
            dt = dt.min(self.cfl * h / umax);
        }
        if let Some(d) = self.dt_max {
            dt = dt.min(d);
        }
        dt = dt.min(self.t_end);
        let steps = (self.t_end / dt - 1e-9).ceil().max(1.0) as usize;
        (self.t_end / steps as f64, steps)
    }
}
