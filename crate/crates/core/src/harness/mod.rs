//! Epsilon sweeps and the metrics that compare their runs with the limits.

pub mod metrics;
mod sweep;

pub use metrics::{
    fit_rate, metric_constraint, metric_s_decay, metric_sigma_bound, metric_strong,
    metric_strong_scalar, metric_weak, s_norm, weak_strong_constant, ConstraintReport,
    SIGMA_BOUND_INDEX, S_DECAY_INDEX,
};
pub use sweep::{
    run_sweep, ConvergenceReport, Expectation, Metric, RateRow, RunSummary, SweepConfig,
};
