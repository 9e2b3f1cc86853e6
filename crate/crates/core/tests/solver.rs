use std::f64::consts::PI;

use nsc_core::nsc::weak::{
    bank_residuals, standard_bank, vorticity_form_residual, weak_residual_mass,
    weak_residual_momentum, TestFunction,
};
use nsc_core::nsc::{
    critical_set_measure, run, InitialData, InitialSpec, Mode, RhoRef, RunOutput, ScalarSpec,
    SimConfig, VelocitySpec,
};
use nsc_core::spectral::norms::vector_l2_norm;
use nsc_core::spectral::{Grid, ScalarField, VectorField};
use nsc_core::windows::TimeProfile;
use nsc_core::Error;
use proptest::prelude::*;

fn simulate(cfg: &SimConfig, spec: &InitialSpec) -> RunOutput {
    let grid = cfg.grid().unwrap();
    let init = InitialData::from_spec(spec, &grid, cfg.seed).unwrap();
    run(cfg, &init).unwrap()
}

fn shear_spec() -> InitialSpec {
    InitialSpec {
        rho_ref: RhoRef::Constant,
        r0: ScalarSpec::Zero,
        u0: VelocitySpec::Shear { amplitude: 1.0 },
    }
}

fn zonal_random_spec() -> InitialSpec {
    InitialSpec {
        rho_ref: RhoRef::Zonal,
        r0: ScalarSpec::Zero,
        u0: VelocitySpec::Random {
            kmax: 4.0,
            decay: 1.0,
            rms: 1.0,
        },
    }
}

fn shear_error(out: &RunOutput, nu: f64) -> f64 {
    let last = out.trajectory.last();
    let decay = (-nu * last.t).exp();
    let exact = VectorField::from_fn(out.trajectory.grid(), |_, y| (decay * y.sin(), 0.0));
    vector_l2_norm(&(&last.u - &exact))
}

#[test]
fn shear_flow_decays_exactly_for_every_epsilon() {
    let mut errors = Vec::new();
    for eps in [1.0, 0.1, 0.01] {
        let cfg = SimConfig {
            epsilon: eps,
            n: 32,
            t_end: 0.2,
            dt_max: Some(1e-3),
            ..SimConfig::default()
        };
        let out = simulate(&cfg, &shear_spec());
        let err = shear_error(&out, cfg.nu);
        assert!(err < 1e-8, "eps {eps}: {err}");
        errors.push(err);
    }
    // all three runs integrate the same heat equation
    let spread = errors.iter().cloned().fold(0.0, f64::max) - errors.iter().cloned().fold(1.0, f64::min);
    assert!(spread < 1e-12, "{errors:?}");
}

#[test]
fn shear_error_is_second_order_in_time() {
    let err = |dt: f64| {
        let cfg = SimConfig {
            epsilon: 0.1,
            nu: 0.5,
            n: 16,
            t_end: 0.4,
            dt_max: Some(dt),
            ..SimConfig::default()
        };
        shear_error(&simulate(&cfg, &shear_spec()), cfg.nu)
    };
    let (a, b) = (err(0.04), err(0.02));
    assert!(a / b > 3.5, "{a} {b}");
}

#[test]
fn rest_state_stays_at_rest() {
    let cfg = SimConfig {
        n: 16,
        t_end: 0.1,
        ..SimConfig::default()
    };
    let spec = InitialSpec {
        rho_ref: RhoRef::Zonal,
        r0: ScalarSpec::Zero,
        u0: VelocitySpec::Rest,
    };
    let out = simulate(&cfg, &spec);
    let first = &out.trajectory.snapshots[0];
    let last = out.trajectory.last();
    assert!(last.u.max_abs() < 1e-14);
    assert!((&last.rho - &first.rho).max_abs() < 1e-14);
}

#[test]
fn zero_final_time_returns_the_initial_state() {
    let cfg = SimConfig {
        n: 16,
        t_end: 0.0,
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &InitialSpec::default());
    assert_eq!(out.steps, 0);
    assert_eq!(out.trajectory.snapshots.len(), 1);
    assert_eq!(out.ledger.rows.len(), 1);
}

#[test]
fn shear_dissipation_matches_the_heat_equation() {
    let cfg = SimConfig {
        epsilon: 0.1,
        n: 32,
        t_end: 0.5,
        dt_max: Some(1e-3),
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &shear_spec());
    let row = out.ledger.rows.last().unwrap();
    // 2 nu int_0^T e^{-2 nu t} ||cos x2||^2 dt
    let expected = 2.0 * PI * PI * (1.0 - (-2.0 * cfg.nu * cfg.t_end).exp());
    assert!((row.dissipation - expected).abs() / expected < 1e-4, "{} {expected}", row.dissipation);
}

#[test]
fn zonal_run_respects_the_energy_inequality() {
    let cfg = SimConfig {
        epsilon: 0.05,
        n: 32,
        t_end: 0.25,
        seed: 1,
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &zonal_random_spec());
    let l = &out.ledger;
    assert!(l.energy_excess() <= 1e-6, "{}", l.energy_excess());
    assert!(l.is_non_increasing(1e-12));
    assert!(l.mass_drift() < 1e-12, "{}", l.mass_drift());
    assert!(l.max_coriolis_work() < 1e-12, "{}", l.max_coriolis_work());
    assert!(l.max_div_residual() < 1e-10, "{}", l.max_div_residual());
}

#[test]
fn runs_are_deterministic() {
    let cfg = SimConfig {
        epsilon: 0.1,
        n: 16,
        t_end: 0.1,
        seed: 7,
        ..SimConfig::default()
    };
    let a = simulate(&cfg, &zonal_random_spec());
    let b = simulate(&cfg, &zonal_random_spec());
    let (x, y) = (a.trajectory.last(), b.trajectory.last());
    assert_eq!(x.u.x1().values(), y.u.x1().values());
    assert_eq!(x.rho.values(), y.rho.values());
}

#[test]
fn density_below_floor_is_a_configuration_error() {
    let cfg = SimConfig {
        epsilon: 1.0,
        n: 16,
        density_floor: 0.5,
        ..SimConfig::default()
    };
    let spec = InitialSpec {
        rho_ref: RhoRef::Constant,
        r0: ScalarSpec::Modes {
            mean: 0.0,
            modes: vec![Mode {
                k1: 1,
                k2: 0,
                cos: 0.9,
                sin: 0.0,
            }],
        },
        u0: VelocitySpec::Rest,
    };
    let grid = cfg.grid().unwrap();
    let init = InitialData::from_spec(&spec, &grid, 0).unwrap();
    assert!(matches!(run(&cfg, &init), Err(Error::Config(_))));
}

#[test]
fn configuration_invariants_are_checked() {
    let bad = [
        SimConfig { epsilon: 0.0, ..SimConfig::default() },
        SimConfig { epsilon: 1.5, ..SimConfig::default() },
        SimConfig { nu: 0.0, ..SimConfig::default() },
        SimConfig { n: 48, ..SimConfig::default() },
        SimConfig { t_end: -1.0, ..SimConfig::default() },
        SimConfig { snapshot_every: 0, ..SimConfig::default() },
    ];
    for cfg in bad {
        assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
    }
    let msg = SimConfig { epsilon: 0.0, ..SimConfig::default() }
        .validate()
        .unwrap_err()
        .to_string();
    assert!(msg.contains("(0, 1]"), "{msg}");
    assert!(SimConfig::default().validate().is_ok());
}

#[test]
fn time_step_respects_every_limit() {
    let cfg = SimConfig {
        epsilon: 0.02,
        n: 64,
        t_end: 1.0,
        ..SimConfig::default()
    };
    let (dt, steps) = cfg.time_step(1.0);
    assert!(dt <= 0.5 * 0.02 + 1e-15);
    assert!(dt <= 0.4 * 2.0 * PI / 64.0 + 1e-15);
    assert!((dt * steps as f64 - 1.0).abs() < 1e-12);
}

#[test]
fn critical_set_of_zonal_reference_shrinks() {
    let g = Grid::new(64).unwrap();
    let rho0 = ScalarField::from_fn(&g, |_, y| 2.0 + y.sin());
    let m: Vec<f64> = [1e-1, 1e-2, 1e-3].iter().map(|&d| critical_set_measure(&rho0, d)).collect();
    assert!(m[0] > m[1] && m[1] > m[2], "{m:?}");
    assert!(m[2] <= 0.01);
    // for sin x2 the set |cos x2| <= d has measure 2 asin(d) / pi
    assert!((m[0] - 2.0 * (0.1f64).asin() / PI).abs() < 0.01, "{m:?}");
}

#[test]
fn degenerate_critical_set_is_flagged() {
    let g = Grid::new(64).unwrap();
    // cos^3 x2 has a double critical line where cos x2 = 0
    let rho0 = ScalarField::from_fn(&g, |_, y| 2.0 + y.cos().powi(3));
    assert!(critical_set_measure(&rho0, 1e-3) > 0.01);
}

#[test]
fn zero_test_function_gives_zero_residual() {
    let cfg = SimConfig {
        n: 16,
        t_end: 0.1,
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &InitialSpec::default());
    let tf = TestFunction::new(
        ScalarField::zeros(out.trajectory.grid()),
        TimeProfile::Bump {
            center: 0.05,
            half_width: 0.05,
        },
    );
    assert_eq!(weak_residual_mass(&out.trajectory, &tf).unwrap(), 0.0);
    assert_eq!(weak_residual_momentum(&out.trajectory, &tf).unwrap(), 0.0);
}

#[test]
fn test_function_support_outside_the_run_is_rejected() {
    let cfg = SimConfig {
        n: 16,
        t_end: 0.1,
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &InitialSpec::default());
    let tf = TestFunction::new(
        ScalarField::from_fn(out.trajectory.grid(), |x, _| x.cos()),
        TimeProfile::Bump {
            center: 0.2,
            half_width: 0.05,
        },
    );
    assert!(weak_residual_mass(&out.trajectory, &tf).is_err());
}

#[test]
fn shear_flow_satisfies_the_weak_formulation() {
    let cfg = SimConfig {
        epsilon: 0.1,
        n: 32,
        t_end: 1.0,
        dt_max: Some(2.5e-3),
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &shear_spec());
    let (mass, momentum) = bank_residuals(&out.trajectory).unwrap();
    assert!(mass <= 1e-4, "{mass}");
    assert!(momentum <= 1e-3, "{momentum}");
    assert_eq!(standard_bank(&out.trajectory).len(), 8);
}

#[test]
fn zonal_run_satisfies_the_vorticity_form() {
    let cfg = SimConfig {
        epsilon: 0.05,
        n: 32,
        t_end: 0.25,
        dt_max: Some(2.5e-3),
        seed: 1,
        ..SimConfig::default()
    };
    let out = simulate(&cfg, &zonal_random_spec());
    let worst = vorticity_form_residual(&out.trajectory).into_iter().fold(0.0, f64::max);
    assert!(worst <= 1e-2, "{worst}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn energy_never_grows(seed in 0u64..1000, eps in 0.02f64..1.0) {
        let cfg = SimConfig {
            epsilon: eps,
            n: 16,
            t_end: 0.1,
            seed,
            ..SimConfig::default()
        };
        let spec = InitialSpec {
            rho_ref: RhoRef::Constant,
            r0: ScalarSpec::Random { kmax: 3.0, decay: 1.0, rms: 0.3 },
            u0: VelocitySpec::Random { kmax: 4.0, decay: 1.0, rms: 1.0 },
        };
        let out = simulate(&cfg, &spec);
        prop_assert!(out.ledger.energy_excess() <= 1e-6);
        prop_assert!(out.ledger.is_non_increasing(1e-12));
        prop_assert!(out.ledger.mass_drift() < 1e-12);
        prop_assert!(out.ledger.max_coriolis_work() < 1e-12);
    }
}
