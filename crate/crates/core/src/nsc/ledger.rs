use serde::Serialize;

/// Diagnostics after one step (row 0 describes the initial state).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LedgerRow {
    pub step: usize,
    pub t: f64,
    /// ||sqrt(rho) u||^2
    pub kinetic: f64,
    /// 2 nu int_0^t ||grad u||^2, midpoint rule
    pub dissipation: f64,
    /// Energy removed by the weighted projection, accumulated.
    pub projection_loss: f64,
    /// dt / eps * int rho u^perp . u at the midpoint of the last step.
    pub coriolis_work: f64,
    pub mass: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    /// ||div u||_{L^2}
    pub div_residual: f64,
    pub iterations: usize,
    pub projection_iterations: usize,
}

impl LedgerRow {
    pub const HEADER: [&'static str; 12] = [
        "step",
        "t",
        "kinetic",
        "dissipation",
        "projection_loss",
        "coriolis_work",
        "mass",
        "rho_min",
        "rho_max",
        "div_residual",
        "iterations",
        "projection_iterations",
    ];

    pub fn values(&self) -> [f64; 12] {
        [
            self.step as f64,
            self.t,
            self.kinetic,
            self.dissipation,
            self.projection_loss,
            self.coriolis_work,
            self.mass,
            self.rho_min,
            self.rho_max,
            self.div_residual,
            self.iterations as f64,
            self.projection_iterations as f64,
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct EnergyLedger {
    pub rows: Vec<LedgerRow>,
}

impl EnergyLedger {
    pub fn initial_kinetic(&self) -> f64 {
        self.rows.first().map_or(0.0, |r| r.kinetic)
    }

    /// Largest (kinetic + dissipation - initial) / initial over the run, or
    /// the absolute excess when the initial energy vanishes.
    pub fn energy_excess(&self) -> f64 {
        let e0 = self.initial_kinetic();
        let scale = if e0 > 0.0 { e0 } else { 1.0 };
        self.rows
            .iter()
            .map(|r| (r.kinetic + r.dissipation - e0) / scale)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest relative drift of the mass.
    pub fn mass_drift(&self) -> f64 {
        let m0 = self.rows.first().map_or(0.0, |r| r.mass);
        self.rows
            .iter()
            .map(|r| ((r.mass - m0) / m0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_coriolis_work(&self) -> f64 {
        self.rows.iter().map(|r| r.coriolis_work.abs()).fold(0.0, f64::max)
    }

    pub fn max_div_residual(&self) -> f64 {
        self.rows.iter().map(|r| r.div_residual).fold(0.0, f64::max)
    }

    /// True when kinetic + dissipation never increases from one row to the next.
    pub fn is_non_increasing(&self, tol: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].kinetic + w[1].dissipation <= w[0].kinetic + w[0].dissipation + tol)
    }
}
