//! Solver for the rotating variable-density Navier-Stokes system on the torus.

mod config;
mod initial;
mod ledger;
mod run;
mod state;
mod stepper;
pub mod weak;

pub use config::SimConfig;
pub use initial::{
    critical_set_measure, InitialData, InitialSpec, Mode, RhoRef, ScalarSpec, VelocitySpec,
    CRITICAL_DELTAS,
};
pub use ledger::{EnergyLedger, LedgerRow};
pub use run::{run, RunOutput, Trajectory};
pub use state::{derived_fields, momentum_force, DerivedFields, State};
pub use stepper::{kinetic_energy, StepReport, Stepper};
