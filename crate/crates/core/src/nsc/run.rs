use super::config::SimConfig;
use super::initial::InitialData;
use super::ledger::{EnergyLedger, LedgerRow};
use super::state::{derived_fields, DerivedFields, State};
use super::stepper::{kinetic_energy, StepReport, Stepper};
use crate::error::Result;
use crate::spectral::norms::l2_norm;
use crate::spectral::ops::divergence;
use crate::spectral::{Grid, ScalarField};

/// Snapshots of one run together with the parameters needed to interpret them.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub epsilon: f64,
    pub nu: f64,
    pub rho_ref: ScalarField,
    pub snapshots: Vec<State>,
}

impl Trajectory {
    pub fn grid(&self) -> &Grid {
        self.rho_ref.grid()
    }

    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn derived(&self, i: usize) -> DerivedFields {
        derived_fields(&self.snapshots[i], &self.rho_ref, self.epsilon, self.nu)
    }

    pub fn last(&self) -> &State {
        self.snapshots.last().expect("a trajectory holds the initial state")
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub ledger: EnergyLedger,
    pub dt: f64,
    pub steps: usize,
}

fn ledger_row(step: usize, state: &State, totals: &StepReport, last: &StepReport) -> LedgerRow {
    LedgerRow {
        step,
        t: state.t,
        kinetic: kinetic_energy(&state.rho, &state.u),
        dissipation: totals.dissipation,
        projection_loss: totals.projection_loss,
        coriolis_work: last.coriolis_work,
        mass: state.rho.integral(),
        rho_min: state.rho.min(),
        rho_max: state.rho.max(),
        div_residual: l2_norm(&divergence(&state.u)),
        iterations: last.iterations,
        projection_iterations: last.projection_iterations,
    }
}

/// Integrates from the assembled initial state to `t_end` with a fixed step,
/// keeping every `snapshot_every`-th state and always the final one.
pub fn run(cfg: &SimConfig, init: &InitialData) -> Result<RunOutput> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let mut state = init.assemble(cfg)?;
    let (dt, steps) = cfg.time_step(state.u.magnitude().max());
    let mut stepper = Stepper::new(cfg, &grid);
    let mut totals = StepReport::default();
    let mut ledger = EnergyLedger::default();
    ledger
        .rows
        .push(ledger_row(0, &state, &totals, &StepReport::default()));
    let mut snapshots = vec![physical(&state)];
    for n in 1..=steps {
        let (next, report) = stepper.step(&state, dt)?;
        state = next;
        // the last step lands exactly on t_end
        if n == steps {
            state.t = cfg.t_end;
        }
        totals.dissipation += report.dissipation;
        totals.projection_loss += report.projection_loss;
        ledger.rows.push(ledger_row(n, &state, &totals, &report));
        if n % cfg.snapshot_every == 0 || n == steps {
            snapshots.push(physical(&state));
        }
    }
    Ok(RunOutput {
        trajectory: Trajectory {
            epsilon: cfg.epsilon,
            nu: cfg.nu,
            rho_ref: init.rho_ref.clone(),
            snapshots,
        },
        ledger,
        dt,
        steps,
    })
}

fn physical(s: &State) -> State {
    State {
        rho: s.rho.to_physical(),
        u: s.u.to_physical(),
        t: s.t,
    }
}
