use nsc_core::limit::{
    check_zonal, coupling_work, eta_from_omega, h1_envelope, hom_invariants,
    hom_limit_vorticity_residual, momentum_vorticity, non_zonal_fraction, run_hom_limit,
    stability_twin_test, zonal_limit_residual, zonal_project, HomLimitState, HomTrajectory,
    ZonalDiagnostics, STABILITY_BUDGET,
};
use nsc_core::nsc::{run, InitialData, InitialSpec, RhoRef, ScalarSpec, SimConfig, VelocitySpec};
use nsc_core::spectral::norms::{l2_norm, vector_l2_norm};
use nsc_core::spectral::ops::{curl, gradient, perp_gradient};
use nsc_core::spectral::random::{random_scalar, random_solenoidal, RandomSpec};
use nsc_core::spectral::{Grid, ScalarField, VectorField};
use nsc_core::windows::bump_bank;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_data(grid: &Grid, seed: u64) -> HomLimitState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = random_scalar(grid, &mut rng, &RandomSpec { kmax: 4.0, decay: 1.0, rms: 1.0 });
    let u = random_solenoidal(grid, &mut rng, &RandomSpec { kmax: 4.0, decay: 1.0, rms: 1.0 });
    HomLimitState::new(&r, &u)
}

fn shear(grid: &Grid) -> VectorField {
    VectorField::from_fn(grid, |_, y| (y.sin(), 0.0))
}

fn limit_run(init: &HomLimitState, dt: f64, t_end: f64) -> HomTrajectory {
    let steps = (t_end / dt).round() as usize;
    run_hom_limit(init, 0.05, dt, steps, 1).unwrap()
}

#[test]
fn limit_shear_without_coupling_decays_exactly() {
    let g = Grid::new(32).unwrap();
    let init = HomLimitState::new(&ScalarField::zeros(&g), &shear(&g));
    let traj = limit_run(&init, 1e-2, 1.0);
    let last = traj.last();
    let exact = &shear(&g) * (-0.05 * last.t).exp();
    assert!(vector_l2_norm(&(&last.u - &exact)) < 1e-6);
    assert!(l2_norm(&last.r) < 1e-14);
}

#[test]
fn constant_coupling_acts_as_a_pressure() {
    let g = Grid::new(32).unwrap();
    let r = ScalarField::constant(&g, 0.7);
    let init = HomLimitState::new(&r, &shear(&g));
    let traj = limit_run(&init, 1e-2, 0.5);
    let last = traj.last();
    assert!((&last.r - &r).max_abs() < 1e-10);
    let exact = &shear(&g) * (-0.05 * last.t).exp();
    assert!(vector_l2_norm(&(&last.u - &exact)) < 1e-6);
}

#[test]
fn limit_velocity_is_mean_free() {
    let g = Grid::new(16).unwrap();
    let u = VectorField::from_fn(&g, |_, y| (1.0 + y.sin(), 0.5));
    let init = HomLimitState::new(&ScalarField::from_fn(&g, |x, y| x.cos() + y.sin()), &u);
    let traj = limit_run(&init, 1e-2, 0.2);
    for s in &traj.snapshots {
        assert!(s.u.x1().mean().abs() < 1e-14 && s.u.x2().mean().abs() < 1e-14);
    }
}

#[test]
fn limit_invariants_hold_on_random_data() {
    let g = Grid::new(32).unwrap();
    let traj = limit_run(&random_data(&g, 3), 1e-2, 0.5);
    let inv = hom_invariants(&traj);
    assert!(inv.r_l2_drift <= 1e-8, "{inv:?}");
    assert!(inv.max_div <= 1e-10, "{inv:?}");
    assert!(inv.energy_ratio <= 1.0 + 1e-4, "{inv:?}");
    let scale = vector_l2_norm(&traj.snapshots[0].u).powi(2);
    for w in coupling_work(&traj) {
        assert!(w <= 1e-12 * scale.max(1.0), "{w}");
    }
}

#[test]
fn limit_vorticity_residual() {
    let g = Grid::new(32).unwrap();
    let rest = HomLimitState::new(&ScalarField::zeros(&g), &VectorField::zeros(&g));
    assert_eq!(hom_limit_vorticity_residual(&limit_run(&rest, 1e-2, 0.1)), 0.0);

    let sh = HomLimitState::new(&ScalarField::zeros(&g), &shear(&g));
    assert!(hom_limit_vorticity_residual(&limit_run(&sh, 1e-2, 0.5)) <= 1e-6);

    let data = random_data(&g, 5);
    let coarse = hom_limit_vorticity_residual(&limit_run(&data, 1e-2, 0.5));
    let fine = hom_limit_vorticity_residual(&limit_run(&data, 5e-3, 0.5));
    assert!(fine <= 1e-3, "{fine}");
    // second order in time
    assert!(coarse / fine > 3.0, "{coarse} {fine}");
}

#[test]
fn twin_test_on_identical_data_is_zero() {
    let g = Grid::new(16).unwrap();
    let base = random_data(&g, 1);
    let rep = stability_twin_test(
        &base,
        &ScalarField::zeros(&g),
        &VectorField::zeros(&g),
        0.05,
        1e-2,
        20,
    )
    .unwrap();
    assert_eq!(rep.numerator, 0.0);
    assert_eq!(rep.ratio, 0.0);
    assert!(rep.pass);
}

#[test]
fn twin_test_response_is_linear() {
    let g = Grid::new(32).unwrap();
    let base = random_data(&g, 2);
    let delta = random_data(&g, 102);
    let rep = stability_twin_test(&base, &(&delta.r * 1e-3), &(&delta.u * 1e-3), 0.05, 1e-2, 50).unwrap();
    assert!(rep.linear, "{rep:?}");
    assert!(rep.ratio <= STABILITY_BUDGET, "{rep:?}");
    assert!((rep.response - 0.5).abs() < 0.02, "{rep:?}");
}

#[test]
fn eta_from_omega_is_identity_for_unit_density() {
    let g = Grid::new(32).unwrap();
    let u = random_data(&g, 4).u;
    let w = curl(&u);
    let eta = eta_from_omega(&w, &ScalarField::constant(&g, 1.0)).unwrap();
    assert!((&eta - &w).max_abs() < 1e-10);
}

#[test]
fn eta_from_omega_matches_momentum_vorticity_on_the_constraint() {
    let g = Grid::new(32).unwrap();
    let rho0 = ScalarField::from_fn(&g, |_, y| 2.0 + y.sin());
    // mean-free zonal flow satisfies div u = div(rho0 u) = 0
    let u = VectorField::from_fn(&g, |_, y| (y.sin() + 0.3 * (2.0 * y).cos(), 0.0));
    let eta = eta_from_omega(&curl(&u), &rho0).unwrap();
    assert!((&eta - &momentum_vorticity(&u, &rho0)).max_abs() < 1e-10);
}

#[test]
fn zonal_projection_properties() {
    let g = Grid::new(32).unwrap();
    let rho0 = ScalarField::from_fn(&g, |_, y| 2.0 + y.sin());
    let u = random_data(&g, 6).u;
    let p = zonal_project(&u, &rho0).unwrap();
    let pp = zonal_project(&p, &rho0).unwrap();
    assert!(vector_l2_norm(&(&pp - &p)) < 1e-14);
    assert!(vector_l2_norm(&p) <= vector_l2_norm(&u) + 1e-14);
    assert!(l2_norm(&p.dot(&gradient(&rho0))) < 1e-10);
    assert!(non_zonal_fraction(&p) < 1e-28);

    let wave = perp_gradient(&ScalarField::from_fn(&g, |x, _| x.cos()));
    assert!(vector_l2_norm(&zonal_project(&wave, &rho0).unwrap()) < 1e-14);
    assert!((non_zonal_fraction(&wave) - 1.0).abs() < 1e-14);
}

#[test]
fn zonal_check_rejects_other_densities() {
    let g = Grid::new(16).unwrap();
    assert!(check_zonal(&ScalarField::constant(&g, 1.0)).is_err());
    assert!(check_zonal(&ScalarField::from_fn(&g, |x, y| 2.0 + y.sin() + 0.1 * x.cos())).is_err());
    assert!(check_zonal(&ScalarField::from_fn(&g, |_, y| 2.0 + y.sin())).is_ok());
}

#[test]
fn zonal_diagnostics_and_residual() {
    let cfg = SimConfig {
        epsilon: 0.05,
        n: 32,
        t_end: 0.5,
        ..SimConfig::default()
    };
    let spec = InitialSpec {
        rho_ref: RhoRef::Zonal,
        r0: ScalarSpec::Zero,
        u0: VelocitySpec::Shear { amplitude: 1.0 },
    };
    let init = InitialData::from_spec(&spec, &cfg.grid().unwrap(), 0).unwrap();
    let out = run(&cfg, &init).unwrap();
    // a zonal shear is an exact steady solution of the constraint
    let d = ZonalDiagnostics::of_snapshot(&out.trajectory, 0).unwrap();
    assert!(d.constraint_residual < 1e-12);
    assert!(d.non_zonal_fraction < 1e-28);
    assert_eq!(d.mean_u1.len(), 32);
    let res = zonal_limit_residual(&out.trajectory, &bump_bank(cfg.t_end, 4)).unwrap();
    assert_eq!(res.len(), 4);
    assert!(res.iter().all(|&r| r.is_finite() && r >= 0.0));
}

#[test]
fn h1_envelope_is_respected() {
    let g = Grid::new(32).unwrap();
    let traj = limit_run(&random_data(&g, 8), 1e-2, 0.5);
    let rep = h1_envelope(&traj);
    assert!(rep.finite && rep.holds, "{rep:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn limit_conserves_the_density_norm(seed in 0u64..1000) {
        let g = Grid::new(16).unwrap();
        let traj = limit_run(&random_data(&g, seed), 1e-2, 0.1);
        let inv = hom_invariants(&traj);
        prop_assert!(inv.r_l2_drift <= 1e-8);
        prop_assert!(inv.max_div <= 1e-10);
    }

    #[test]
    fn zonal_projection_is_idempotent(seed in 0u64..1000) {
        let g = Grid::new(16).unwrap();
        let rho0 = ScalarField::from_fn(&g, |_, y| 2.0 + y.sin());
        let u = random_data(&g, seed).u;
        let p = zonal_project(&u, &rho0).unwrap();
        prop_assert!(vector_l2_norm(&(&zonal_project(&p, &rho0).unwrap() - &p)) < 1e-14);
    }
}
