//! What each command writes into its output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::config::{to_toml, RunConfig};
use super::manifest::Manifest;
use super::snapshot::write_snapshot;
use super::table::{fmt_f64, read_csv, write_csv, write_ledger};
use crate::error::{Error, Result};
use crate::harness::{
    metric_strong, metric_strong_scalar, metric_weak, ConvergenceReport, SweepConfig,
};
use crate::limit::{run_hom_limit, HomLimitState};
use crate::littlewood_paley::suite::PropertyRow;
use crate::nsc::{run, weak, InitialData, RhoRef, RunOutput};
use crate::spectral::norms::{l2_norm, vector_l2_norm};
use crate::spectral::{ScalarField, VectorField};
use crate::windows::bump_bank;

pub fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn kv_rows(pairs: &[(&str, f64)]) -> Vec<Vec<String>> {
    pairs
        .iter()
        .map(|(k, v)| vec![k.to_string(), fmt_f64(*v)])
        .collect()
}

/// Ledger, snapshots and summary of one finished run.
pub fn write_run(dir: &Path, out: &RunOutput) -> Result<()> {
    ensure_dir(dir)?;
    write_ledger(&dir.join("ledger.csv"), &out.ledger)?;
    let snaps = dir.join("snapshots");
    ensure_dir(&snaps)?;
    let traj = &out.trajectory;
    for (i, s) in traj.snapshots.iter().enumerate() {
        write_snapshot(&snaps.join(format!("snap_{i:05}.bin")), s, traj.epsilon, traj.nu)?;
    }
    let mut summary = vec![
        ("dt", out.dt),
        ("steps", out.steps as f64),
        ("energy_excess", out.ledger.energy_excess()),
        ("mass_drift", out.ledger.mass_drift()),
        ("max_coriolis_work", out.ledger.max_coriolis_work()),
        ("max_div_residual", out.ledger.max_div_residual()),
    ];
    if out.steps > 0 {
        let (mass, momentum) = weak::bank_residuals(traj)?;
        summary.push(("weak_residual_mass", mass));
        summary.push(("weak_residual_momentum", momentum));
    }
    write_csv(&dir.join("summary.csv"), &["quantity", "value"], &kv_rows(&summary))
}

/// `run`: one simulation with its manifest.
pub fn run_command(cfg: &RunConfig, dir: &Path) -> Result<RunOutput> {
    let mut manifest = Manifest::start("run", to_toml(cfg), cfg.simulation.seed);
    let grid = cfg.simulation.grid()?;
    let init = InitialData::from_spec(&cfg.initial, &grid, cfg.simulation.seed)?;
    let out = run(&cfg.simulation, &init)?;
    write_run(dir, &out)?;
    manifest.record_dir(dir)?;
    manifest.finish();
    manifest.write(dir)?;
    Ok(out)
}

/// `sweep`: report tables plus a ledger and manifest per run. A flagged
/// report is still written before the failure is returned.
pub fn sweep_command(cfg: &SweepConfig, dir: &Path, threads: Option<usize>) -> Result<ConvergenceReport> {
    let mut manifest = Manifest::start("sweep", to_toml(cfg), cfg.seed);
    let report = crate::harness::run_sweep(cfg, threads)?;
    write_sweep(dir, cfg, &report)?;
    manifest.record_dir(dir)?;
    manifest.finish();
    manifest.write(dir)?;
    if let Some(f) = &report.failure {
        return Err(Error::InvalidArgument(format!("sweep incomplete: {f}")));
    }
    Ok(report)
}

pub fn write_sweep(dir: &Path, cfg: &SweepConfig, report: &ConvergenceReport) -> Result<()> {
    ensure_dir(dir)?;
    let mut metrics = Vec::new();
    let mut runs = Vec::new();
    for (i, r) in report.runs.iter().enumerate() {
        for (m, v) in &r.metrics {
            metrics.push(vec![m.name().to_string(), fmt_f64(r.epsilon), fmt_f64(*v)]);
        }
        runs.push(vec![
            fmt_f64(r.epsilon),
            fmt_f64(r.dt),
            r.steps.to_string(),
            fmt_f64(r.energy_excess),
            fmt_f64(r.mass_drift),
            fmt_f64(r.max_coriolis_work),
        ]);
        let sub = dir.join(format!("run_{i:02}"));
        ensure_dir(&sub)?;
        let mut sim = cfg.base.clone();
        sim.epsilon = r.epsilon;
        sim.seed = cfg.seed;
        sim.dt_max = Some(report.dt);
        let mut m = Manifest::start("sweep run", to_toml(&sim), cfg.seed);
        write_ledger(&sub.join("ledger.csv"), &r.ledger)?;
        m.record_dir(&sub)?;
        m.finish();
        m.wall_seconds = r.wall_seconds;
        m.write(&sub)?;
    }
    write_csv(&dir.join("metrics.csv"), &["metric", "epsilon", "value"], &metrics)?;
    write_csv(
        &dir.join("runs.csv"),
        &["epsilon", "dt", "steps", "energy_excess", "mass_drift", "max_coriolis_work"],
        &runs,
    )?;
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let rates: Vec<Vec<String>> = report
        .rates
        .iter()
        .map(|r| {
            vec![
                r.metric.name().to_string(),
                opt(r.slope),
                opt(r.residual),
                r.expectation.describe(),
                r.pass.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("rates.csv"),
        &["metric", "slope", "residual", "expectation", "pass"],
        &rates,
    )
}

pub fn write_lp_rows(path: &Path, rows: &[PropertyRow]) -> Result<()> {
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.property.clone(),
                r.n.to_string(),
                r.parameter.clone(),
                fmt_f64(r.measured),
                fmt_f64(r.bound),
                r.pass.to_string(),
            ]
        })
        .collect();
    write_csv(path, &["property", "n", "parameter", "measured", "bound", "pass"], &table)
}

/// Distances between a run and the homogeneous limit on the same data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitComparison {
    pub strong_u: f64,
    pub strong_r: f64,
    pub weak_u: f64,
    pub final_u: f64,
    pub final_r: f64,
}

/// `limit-compare`: runs the configured simulation and the homogeneous
/// limit with the same step, then writes the distances over time.
pub fn limit_compare_command(cfg: &RunConfig, dir: &Path) -> Result<LimitComparison> {
    if !matches!(cfg.initial.rho_ref, RhoRef::Constant) {
        return Err(Error::config(
            "initial.rho_ref: limit-compare needs the constant reference density",
        ));
    }
    if cfg.simulation.t_end <= 0.0 {
        return Err(Error::config("simulation.t_end must be positive for limit-compare"));
    }
    ensure_dir(dir)?;
    let mut manifest = Manifest::start("limit-compare", to_toml(cfg), cfg.simulation.seed);
    let sim = &cfg.simulation;
    let grid = sim.grid()?;
    let init = InitialData::from_spec(&cfg.initial, &grid, sim.seed)?;
    let out = run(sim, &init)?;
    let limit = run_hom_limit(
        &HomLimitState::new(&init.r0, &init.u0),
        sim.nu,
        out.dt,
        out.steps,
        sim.snapshot_every,
    )?;
    let traj = &out.trajectory;
    let sigma: Vec<ScalarField> = (0..traj.snapshots.len()).map(|i| traj.derived(i).sigma).collect();
    let us: Vec<(f64, &VectorField)> = traj.snapshots.iter().map(|s| (s.t, &s.u)).collect();
    let ul: Vec<(f64, &VectorField)> = limit.snapshots.iter().map(|s| (s.t, &s.u)).collect();
    let rs: Vec<(f64, &ScalarField)> = traj.snapshots.iter().zip(&sigma).map(|(s, f)| (s.t, f)).collect();
    let rl: Vec<(f64, &ScalarField)> = limit.snapshots.iter().map(|s| (s.t, &s.r)).collect();
    let windows = bump_bank(sim.t_end, 10);
    let mut rows = Vec::new();
    for i in 0..us.len() {
        rows.push(vec![
            fmt_f64(us[i].0),
            fmt_f64(vector_l2_norm(&(us[i].1 - ul[i].1))),
            fmt_f64(l2_norm(&(rs[i].1 - rl[i].1))),
        ]);
    }
    write_csv(&dir.join("compare.csv"), &["t", "u_distance", "r_distance"], &rows)?;
    let last = us.len() - 1;
    let cmp = LimitComparison {
        strong_u: metric_strong(&us, &ul)?,
        strong_r: metric_strong_scalar(&rs, &rl)?,
        weak_u: metric_weak(&us, &ul, 8.0, &windows)?,
        final_u: vector_l2_norm(&(us[last].1 - ul[last].1)),
        final_r: l2_norm(&(rs[last].1 - rl[last].1)),
    };
    write_csv(
        &dir.join("summary.csv"),
        &["quantity", "value"],
        &kv_rows(&[
            ("strong_u", cmp.strong_u),
            ("strong_r", cmp.strong_r),
            ("weak_u", cmp.weak_u),
            ("final_u", cmp.final_u),
            ("final_r", cmp.final_r),
        ]),
    )?;
    write_ledger(&dir.join("ledger.csv"), &out.ledger)?;
    manifest.record_dir(dir)?;
    manifest.finish();
    manifest.write(dir)?;
    Ok(cmp)
}

/// `report`: one two-column `<metric>.dat` file (epsilon, value) per metric
/// found in `metrics.csv`. Fails when the table has no rows.
pub fn render_report(metrics_csv: &Path, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let (header, rows) = read_csv(metrics_csv)?;
    if header != ["metric", "epsilon", "value"] {
        return Err(Error::Format {
            what: "metrics table",
            detail: format!("{}: unexpected header {header:?}", metrics_csv.display()),
        });
    }
    if rows.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{} holds no metric values",
            metrics_csv.display()
        )));
    }
    let mut by_metric: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    for (i, r) in rows.into_iter().enumerate() {
        let [m, e, v]: [String; 3] = r.try_into().map_err(|r: Vec<String>| Error::Format {
            what: "metrics table",
            detail: format!("row {}: {} columns", i + 1, r.len()),
        })?;
        by_metric.entry(m).or_default().push((e, v));
    }
    ensure_dir(out_dir)?;
    let mut written = Vec::new();
    for (m, pairs) in by_metric {
        let path = out_dir.join(format!("{m}.dat"));
        let mut text = format!("# epsilon {m}\n");
        for (e, v) in pairs {
            text.push_str(&format!("{e} {v}\n"));
        }
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
