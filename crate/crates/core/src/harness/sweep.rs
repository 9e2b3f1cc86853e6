use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{
    fit_rate, metric_constraint, metric_s_decay, metric_sigma_bound, metric_strong,
    metric_strong_scalar, metric_weak, s_norm, S_DECAY_INDEX,
};
use crate::error::{Error, Result};
use crate::limit::{run_hom_limit, zonal_limit_residual, HomLimitState, HomTrajectory};
use crate::nsc::{run, EnergyLedger, InitialData, InitialSpec, RhoRef, SimConfig, Trajectory};
use crate::spectral::{ScalarField, VectorField};
use crate::windows::bump_bank;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// L^2_T L^2 distance of u_eps to the homogeneous limit velocity.
    StrongU,
    /// L^2_T L^2 distance of sigma_eps to the limit density fluctuation r.
    StrongR,
    /// Windowed low-mode distance of u_eps to the homogeneous limit velocity.
    WeakU,
    /// Windowed H^{-1} norm of u_eps . grad rho_0.
    Constraint,
    /// Non-zonal energy fraction of window-averaged u_eps.
    NonZonal,
    /// Residual of the zonally averaged limit equation.
    ZonalResidual,
    /// sup_t ||sigma_eps||_{H^{-5/2}}.
    SigmaBound,
    /// sup_t ||rho_eps - rho_0||_{H^{-3/4}}.
    SNorm,
    /// sup_t ||rho_eps - rho_0||_{H^{-3/4}} / eps^theta.
    SDecay,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::StrongU,
        Metric::StrongR,
        Metric::WeakU,
        Metric::Constraint,
        Metric::NonZonal,
        Metric::ZonalResidual,
        Metric::SigmaBound,
        Metric::SNorm,
        Metric::SDecay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::StrongU => "strong_u",
            Metric::StrongR => "strong_r",
            Metric::WeakU => "weak_u",
            Metric::Constraint => "constraint",
            Metric::NonZonal => "non_zonal",
            Metric::ZonalResidual => "zonal_residual",
            Metric::SigmaBound => "sigma_bound",
            Metric::SNorm => "s_norm",
            Metric::SDecay => "s_decay",
        }
    }

    pub fn from_name(s: &str) -> Option<Metric> {
        Metric::ALL.into_iter().find(|m| m.name() == s)
    }

    fn needs_limit(self) -> bool {
        matches!(self, Metric::StrongU | Metric::StrongR | Metric::WeakU)
    }

    fn needs_zonal(self) -> bool {
        matches!(self, Metric::NonZonal | Metric::ZonalResidual)
    }

    /// What the sweep is expected to show for this metric.
    pub fn expectation(self) -> Expectation {
        match self {
            Metric::StrongU => Expectation::DecreasingWithSlope(0.8),
            Metric::StrongR | Metric::Constraint => Expectation::StrictlyDecreasing,
            Metric::WeakU | Metric::NonZonal | Metric::ZonalResidual => Expectation::Decreasing,
            Metric::SigmaBound => Expectation::BoundedRatio(10.0),
            Metric::SNorm => Expectation::PositiveSlope,
            Metric::SDecay => Expectation::None,
        }
    }
}

/// Expected behaviour of a metric along the sweep, read in the order of
/// decreasing epsilon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Expectation {
    None,
    Decreasing,
    StrictlyDecreasing,
    /// Strictly decreasing with fitted log-log slope at least the value.
    DecreasingWithSlope(f64),
    /// max / min over epsilon at most the value.
    BoundedRatio(f64),
    PositiveSlope,
}

impl Expectation {
    pub fn describe(&self) -> String {
        match self {
            Expectation::None => "reported only".into(),
            Expectation::Decreasing => "non-increasing as eps decreases".into(),
            Expectation::StrictlyDecreasing => "strictly decreasing as eps decreases".into(),
            Expectation::DecreasingWithSlope(s) => {
                format!("strictly decreasing with slope >= {s}")
            }
            Expectation::BoundedRatio(r) => format!("max/min <= {r}"),
            Expectation::PositiveSlope => "fitted slope > 0".into(),
        }
    }

    /// `values` are ordered like the (decreasing) epsilons.
    pub fn check(&self, values: &[f64], slope: Option<f64>) -> bool {
        let finite = values.iter().all(|v| v.is_finite());
        let non_increasing = values.windows(2).all(|w| w[1] <= w[0]);
        let decreasing = values.windows(2).all(|w| w[1] < w[0]);
        finite
            && match *self {
                Expectation::None => true,
                Expectation::Decreasing => non_increasing,
                Expectation::StrictlyDecreasing => decreasing,
                Expectation::DecreasingWithSlope(s) => decreasing && slope.is_some_and(|v| v >= s),
                Expectation::BoundedRatio(r) => {
                    let max = values.iter().cloned().fold(f64::MIN, f64::max);
                    let min = values.iter().cloned().fold(f64::MAX, f64::min);
                    min > 0.0 && max / min <= r
                }
                Expectation::PositiveSlope => slope.is_some_and(|v| v > 0.0),
            }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub epsilons: Vec<f64>,
    /// Template for every run; epsilon, seed and dt_max are overridden.
    pub base: SimConfig,
    pub initial: InitialSpec,
    /// `None` selects the defaults for the reference density; an empty list
    /// runs the solver only.
    pub metrics: Option<Vec<Metric>>,
    /// Mode cutoff K of the weak metric.
    pub weak_modes: f64,
    /// Number of bump windows on (0, T).
    pub windows: usize,
    /// Exponent used for the reported s_decay ratio.
    pub theta: f64,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            epsilons: vec![0.2, 0.1, 0.05, 0.025],
            base: SimConfig {
                n: 128,
                ..SimConfig::default()
            },
            initial: InitialSpec::default(),
            metrics: None,
            weak_modes: 8.0,
            windows: 10,
            theta: 0.5,
            seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epsilons.is_empty() {
            return Err(Error::config("sweep.epsilons must not be empty"));
        }
        for (i, &e) in self.epsilons.iter().enumerate() {
            if !(e > 0.0 && e <= 1.0) {
                return Err(Error::config(format!(
                    "sweep.epsilons[{i}] = {e} must lie in (0, 1]"
                )));
            }
        }
        if let Some(i) = self.epsilons.windows(2).position(|w| w[1] >= w[0]) {
            return Err(Error::config(format!(
                "sweep.epsilons must be strictly decreasing, but entry {} ({}) follows {}",
                i + 1,
                self.epsilons[i + 1],
                self.epsilons[i]
            )));
        }
        if !(self.weak_modes >= 0.0) {
            return Err(Error::config("sweep.weak_modes must be non-negative"));
        }
        if self.windows == 0 {
            return Err(Error::config("sweep.windows must be at least 1"));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::config(format!(
                "sweep.theta = {} must lie in (0, 1)",
                self.theta
            )));
        }
        let mut base = self.base.clone();
        base.epsilon = self.epsilons[0];
        base.validate_at("base.")?;
        if self.base.t_end <= 0.0 {
            return Err(Error::config("base.t_end must be positive for a sweep"));
        }
        let metrics = self.metric_list();
        let constant = matches!(self.initial.rho_ref, RhoRef::Constant);
        if let Some(m) = metrics.iter().find(|m| m.needs_limit() && !constant) {
            return Err(Error::config(format!(
                "metric {} compares against the homogeneous limit and needs a constant reference density",
                m.name()
            )));
        }
        if let Some(m) = metrics.iter().find(|m| m.needs_zonal() && !self.initial.rho_ref.is_zonal()) {
            return Err(Error::config(format!(
                "metric {} needs a zonal reference density",
                m.name()
            )));
        }
        Ok(())
    }

    /// The configured metrics, or the defaults for the reference density.
    pub fn metric_list(&self) -> Vec<Metric> {
        if let Some(m) = &self.metrics {
            return m.clone();
        }
        match self.initial.rho_ref {
            RhoRef::Constant => vec![
                Metric::StrongU,
                Metric::StrongR,
                Metric::WeakU,
                Metric::SigmaBound,
                Metric::SNorm,
                Metric::SDecay,
            ],
            ref r if r.is_zonal() => vec![
                Metric::Constraint,
                Metric::NonZonal,
                Metric::ZonalResidual,
                Metric::SigmaBound,
                Metric::SNorm,
                Metric::SDecay,
            ],
            _ => vec![Metric::Constraint, Metric::SigmaBound, Metric::SNorm, Metric::SDecay],
        }
    }

    fn run_config(&self, epsilon: f64, dt: f64) -> SimConfig {
        SimConfig {
            epsilon,
            seed: self.seed,
            dt_max: Some(dt),
            ..self.base.clone()
        }
    }
}

/// Outcome of one run of the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub epsilon: f64,
    pub dt: f64,
    pub steps: usize,
    pub energy_excess: f64,
    pub mass_drift: f64,
    pub max_coriolis_work: f64,
    pub wall_seconds: f64,
    /// (metric, value) in the order of the metric list.
    pub metrics: Vec<(Metric, f64)>,
    #[serde(skip)]
    pub ledger: EnergyLedger,
}

#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub metric: Metric,
    pub values: Vec<f64>,
    /// Least-squares slope of log(value) against log(eps), when defined.
    pub slope: Option<f64>,
    pub residual: Option<f64>,
    pub expectation: Expectation,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub epsilons: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    pub runs: Vec<RunSummary>,
    pub rates: Vec<RateRow>,
    /// Set when a run failed; the report then holds only the finished runs.
    pub failure: Option<String>,
}

impl ConvergenceReport {
    pub fn rate(&self, m: Metric) -> Option<&RateRow> {
        self.rates.iter().find(|r| r.metric == m)
    }

    pub fn complete(&self) -> bool {
        self.failure.is_none()
    }
}

struct Shared {
    init: InitialData,
    limit: Option<HomTrajectory>,
    windows: Vec<crate::windows::TimeProfile>,
    metrics: Vec<Metric>,
}

/// Runs the solver once per epsilon on `threads` worker threads (all cores
/// when `None`) and evaluates the metrics, each run against the same initial
/// data and, where needed, the same homogeneous limit trajectory.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<ConvergenceReport> {
    cfg.validate()?;
    let grid = cfg.base.grid()?;
    let init = InitialData::from_spec(&cfg.initial, &grid, cfg.seed)?;
    let umax = init.u0.magnitude().max();
    // one step size for every run, so that all trajectories share their times
    let dt = cfg
        .epsilons
        .iter()
        .map(|&e| cfg.run_config(e, f64::INFINITY).time_step(umax).0)
        .fold(f64::INFINITY, f64::min);
    let (dt, steps) = cfg.run_config(cfg.epsilons[0], dt).time_step(umax);
    let metrics = cfg.metric_list();
    let limit = if metrics.iter().any(|m| m.needs_limit()) {
        let start = HomLimitState::new(&init.r0, &init.u0);
        Some(run_hom_limit(&start, cfg.base.nu, dt, steps, cfg.base.snapshot_every)?)
    } else {
        None
    };
    let shared = Shared {
        windows: bump_bank(cfg.base.t_end, cfg.windows),
        init,
        limit,
        metrics,
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<RunSummary>> = pool.install(|| {
        cfg.epsilons
            .par_iter()
            .map(|&e| one_run(cfg, &shared, e, dt))
            .collect()
    });

    let mut runs = Vec::new();
    let mut failure = None;
    for (e, o) in cfg.epsilons.iter().zip(outcomes) {
        match o {
            Ok(r) => runs.push(r),
            Err(err) => {
                failure.get_or_insert_with(|| format!("run at eps = {e}: {err}"));
            }
        }
    }
    let rates = if failure.is_none() {
        rate_rows(&cfg.epsilons, &shared.metrics, &runs)
    } else {
        Vec::new()
    };
    Ok(ConvergenceReport {
        epsilons: cfg.epsilons.clone(),
        dt,
        steps,
        runs,
        rates,
        failure,
    })
}

fn rate_rows(epsilons: &[f64], metrics: &[Metric], runs: &[RunSummary]) -> Vec<RateRow> {
    metrics
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            let values: Vec<f64> = runs.iter().map(|r| r.metrics[j].1).collect();
            let fit = fit_rate(epsilons, &values).ok();
            let expectation = m.expectation();
            let slope = fit.map(|f| f.slope);
            RateRow {
                metric: m,
                pass: expectation.check(&values, slope),
                values,
                slope,
                residual: fit.map(|f| f.rms_residual),
                expectation,
            }
        })
        .collect()
}

fn one_run(cfg: &SweepConfig, shared: &Shared, epsilon: f64, dt: f64) -> Result<RunSummary> {
    let start = Instant::now();
    let sim = cfg.run_config(epsilon, dt);
    let out = run(&sim, &shared.init)?;
    let traj = &out.trajectory;
    let mut metrics = Vec::with_capacity(shared.metrics.len());
    let mut constraint = None;
    for &m in &shared.metrics {
        let v = match m {
            Metric::StrongU | Metric::StrongR | Metric::WeakU => {
                let limit = shared.limit.as_ref().expect("limit run present");
                compare_with_limit(m, traj, limit, cfg, &shared.windows)?
            }
            Metric::Constraint | Metric::NonZonal => {
                let c = *constraint.get_or_insert_with(|| metric_constraint(traj, &shared.windows));
                if m == Metric::Constraint {
                    c.windowed
                } else {
                    c.non_zonal_fraction.unwrap_or(f64::NAN)
                }
            }
            Metric::ZonalResidual => zonal_limit_residual(traj, &shared.windows)?
                .into_iter()
                .fold(0.0, f64::max),
            Metric::SigmaBound => metric_sigma_bound(traj),
            Metric::SNorm => s_norm(traj, S_DECAY_INDEX),
            Metric::SDecay => metric_s_decay(traj, cfg.theta, S_DECAY_INDEX)?,
        };
        metrics.push((m, v));
    }
    Ok(RunSummary {
        epsilon,
        dt: out.dt,
        steps: out.steps,
        energy_excess: out.ledger.energy_excess(),
        mass_drift: out.ledger.mass_drift(),
        max_coriolis_work: out.ledger.max_coriolis_work(),
        wall_seconds: start.elapsed().as_secs_f64(),
        metrics,
        ledger: out.ledger,
    })
}

fn compare_with_limit(
    m: Metric,
    traj: &Trajectory,
    limit: &HomTrajectory,
    cfg: &SweepConfig,
    windows: &[crate::windows::TimeProfile],
) -> Result<f64> {
    let us: Vec<(f64, &VectorField)> = traj.snapshots.iter().map(|s| (s.t, &s.u)).collect();
    let ul: Vec<(f64, &VectorField)> = limit.snapshots.iter().map(|s| (s.t, &s.u)).collect();
    match m {
        Metric::StrongU => metric_strong(&us, &ul),
        Metric::WeakU => metric_weak(&us, &ul, cfg.weak_modes, windows),
        _ => {
            let sig: Vec<ScalarField> = (0..traj.snapshots.len())
                .map(|i| traj.derived(i).sigma)
                .collect();
            let a: Vec<(f64, &ScalarField)> =
                traj.snapshots.iter().zip(&sig).map(|(s, f)| (s.t, f)).collect();
            let b: Vec<(f64, &ScalarField)> = limit.snapshots.iter().map(|s| (s.t, &s.r)).collect();
            metric_strong_scalar(&a, &b)
        }
    }
}
