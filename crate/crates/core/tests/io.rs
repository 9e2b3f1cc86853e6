use nsc_core::harness::Metric;
use nsc_core::io::{
    decode_snapshot, encode_snapshot, parse_config, parse_config_str, read_ledger, read_snapshot,
    render_report, run_command, to_toml, write_csv, write_ledger, write_snapshot, ConfigFile,
    Manifest, RunConfig, MANIFEST_NAME,
};
use nsc_core::nsc::{EnergyLedger, InitialSpec, LedgerRow, RhoRef, SimConfig, State, VelocitySpec};
use nsc_core::spectral::{Grid, Representation, ScalarField, VectorField};
use nsc_core::Error;
use proptest::prelude::*;

fn config_error(text: &str) -> String {
    match parse_config_str(text) {
        Err(Error::Config(m)) => m,
        other => panic!("expected a configuration error, got {other:?}"),
    }
}

#[test]
fn empty_file_gives_the_default_run() {
    match parse_config_str("").unwrap() {
        ConfigFile::Run(c) => assert_eq!(c, RunConfig::default()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn run_file_round_trips_through_toml() {
    let cfg = RunConfig {
        simulation: SimConfig {
            epsilon: 0.025,
            n: 32,
            t_end: 0.5,
            dt_max: Some(1e-3),
            ..SimConfig::default()
        },
        initial: InitialSpec {
            rho_ref: RhoRef::Zonal,
            u0: VelocitySpec::Shear { amplitude: 0.5 },
            ..InitialSpec::default()
        },
    };
    match parse_config_str(&to_toml(&cfg)).unwrap() {
        ConfigFile::Run(c) => assert_eq!(c, cfg),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_values_name_the_offending_key() {
    let m = config_error("[simulation]\nepsilon = 0.0\n");
    assert!(m.contains("simulation.epsilon") && m.contains("(0, 1]"), "{m}");
    let m = config_error("[simulation]\nepsilon = 0.1\nviscosity = 1.0\n");
    assert!(m.contains("viscosity"), "{m}");
    let m = config_error("[simulation]\nn = \"big\"\n");
    assert!(m.contains("simulation.n"), "{m}");
    config_error("[base]\nn = 32\n");
    config_error("[sweep]\n[simulation]\nn = 32\n");
    config_error("[simulation\n");
}

#[test]
fn sweep_files() {
    let text = "[sweep]\nepsilons = [0.2, 0.1, 0.05]\nmetrics = [\"strong_u\", \"sigma_bound\"]\n\n[base]\nn = 32\nt_end = 0.5\n";
    match parse_config_str(text).unwrap() {
        ConfigFile::Sweep(s) => {
            assert_eq!(s.epsilons, vec![0.2, 0.1, 0.05]);
            assert_eq!(s.metrics, Some(vec![Metric::StrongU, Metric::SigmaBound]));
            assert_eq!(s.base.n, 32);
            assert_eq!(s.windows, 10);
        }
        other => panic!("{other:?}"),
    }
    let m = config_error("[sweep]\nepsilons = [0.1, 0.2]\n");
    assert!(m.contains("strictly decreasing"), "{m}");
    let m = config_error("[sweep]\nepsilons = [0.1, 0.0]\n");
    assert!(m.contains("(0, 1]"), "{m}");
    let m = config_error("[sweep]\nmetrics = [\"speed\"]\n");
    assert!(m.contains("sweep.metrics"), "{m}");
    match parse_config_str("[sweep]\nmetrics = []\n").unwrap() {
        ConfigFile::Sweep(s) => assert_eq!(s.metrics, Some(vec![])),
        other => panic!("{other:?}"),
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let err = parse_config(std::path::Path::new("/nonexistent/run.toml")).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, "[simulation]\nepsilon = 2.0\n").unwrap();
    let err = parse_config(&p).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("bad.toml"), "{err}");
}

fn sample_state(grid: &Grid, spectral: bool) -> State {
    let rho = ScalarField::from_fn(grid, |x, y| 1.0 + 0.3 * (x - 2.0 * y).sin());
    let u = VectorField::from_fn(grid, |x, y| (y.sin() * x.cos(), 1e-300 + (3.0 * x).cos()));
    if spectral {
        State {
            rho: rho.to_spectral(),
            u: VectorField::new(u.x1().to_spectral(), u.x2().to_spectral()).unwrap(),
            t: 0.123456789,
        }
    } else {
        State { rho, u, t: 1.0 / 3.0 }
    }
}

#[test]
fn snapshots_round_trip_bit_for_bit() {
    let g = Grid::new(16).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for spectral in [false, true] {
        let s = sample_state(&g, spectral);
        let path = dir.path().join(format!("s{spectral}.bin"));
        write_snapshot(&path, &s, 0.05, 0.01).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.epsilon, 0.05);
        assert_eq!(back.nu, 0.01);
        assert_eq!(back.state.t.to_bits(), s.t.to_bits());
        assert_eq!(back.state.rho.representation(), s.rho.representation());
        if spectral {
            assert_eq!(back.state.rho.representation(), Representation::Spectral);
            assert_eq!(back.state.rho.coefficients(), s.rho.coefficients());
            assert_eq!(back.state.u.x2().coefficients(), s.u.x2().coefficients());
        } else {
            assert_eq!(back.state.rho.values(), s.rho.values());
            assert_eq!(back.state.u.x1().values(), s.u.x1().values());
            assert_eq!(back.state.u.x2().values(), s.u.x2().values());
        }
    }
}

#[test]
fn damaged_snapshots_are_rejected() {
    let g = Grid::new(16).unwrap();
    let bytes = encode_snapshot(&sample_state(&g, false), 0.1, 0.05);
    assert!(decode_snapshot(&bytes).is_ok());
    assert!(decode_snapshot(&bytes[..bytes.len() - 1]).is_err());
    let mut longer = bytes.clone();
    longer.push(0);
    assert!(decode_snapshot(&longer).is_err());
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    assert!(matches!(decode_snapshot(&wrong), Err(Error::Format { .. })));
}

fn row(step: usize) -> LedgerRow {
    let t = step as f64 * 1e-3;
    LedgerRow {
        step,
        t,
        kinetic: 1.0 / (1.0 + t),
        dissipation: t.sqrt(),
        projection_loss: 1e-17 * step as f64,
        coriolis_work: -1e-20,
        mass: 4.0 * std::f64::consts::PI.powi(2),
        rho_min: 0.9,
        rho_max: 1.1,
        div_residual: 1e-13,
        iterations: step % 7 + 1,
        projection_iterations: step % 3,
    }
}

#[test]
fn empty_ledger_writes_only_the_header() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.csv");
    write_ledger(&path, &EnergyLedger::default()).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert_eq!(text.trim_end(), LedgerRow::HEADER.join(","));
    assert!(read_ledger(&path).unwrap().rows.is_empty());
}

#[test]
fn long_ledger_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.csv");
    let ledger = EnergyLedger {
        rows: (0..100_000).map(row).collect(),
    };
    write_ledger(&path, &ledger).unwrap();
    assert_eq!(read_ledger(&path).unwrap(), ledger);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ledger_values_round_trip(step in 0usize..1_000_000, k in proptest::num::f64::NORMAL, d in -1e300f64..1e300) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("l.csv");
        let ledger = EnergyLedger { rows: vec![LedgerRow { kinetic: k, dissipation: d, ..row(step) }] };
        write_ledger(&path, &ledger).unwrap();
        prop_assert_eq!(read_ledger(&path).unwrap(), ledger);
    }
}

#[test]
fn report_of_an_empty_table_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metrics.csv");
    write_csv::<String>(&path, &["metric", "epsilon", "value"], &[]).unwrap();
    let err = render_report(&path, &dir.path().join("out")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn report_splits_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("metrics.csv");
    let rows = vec![
        vec!["strong_u", "0.2", "1.0"],
        vec!["sigma_bound", "0.2", "3.0"],
        vec!["strong_u", "0.1", "0.5"],
    ];
    write_csv(&path, &["metric", "epsilon", "value"], &rows).unwrap();
    let files = render_report(&path, &dir.path().join("out")).unwrap();
    assert_eq!(files.len(), 2);
    let text = std::fs::read_to_string(dir.path().join("out/strong_u.dat")).unwrap();
    assert_eq!(text, "# epsilon strong_u\n0.2 1.0\n0.1 0.5\n");
}

fn tiny_run() -> RunConfig {
    RunConfig {
        simulation: SimConfig {
            n: 16,
            t_end: 0.05,
            seed: 3,
            ..SimConfig::default()
        },
        initial: InitialSpec::default(),
    }
}

#[test]
fn run_outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run_command(&tiny_run(), &a).unwrap();
    run_command(&tiny_run(), &b).unwrap();
    let ma = Manifest::read(&a.join(MANIFEST_NAME)).unwrap();
    let mb = Manifest::read(&b.join(MANIFEST_NAME)).unwrap();
    assert!(!ma.files.is_empty());
    assert!(ma.files.iter().any(|f| f.path == "ledger.csv"));
    assert!(ma.files.iter().any(|f| f.path.starts_with("snapshots/")));
    assert!(ma.files.iter().all(|f| f.path != MANIFEST_NAME));
    let sums = |m: &Manifest| m.files.iter().map(|f| (f.path.clone(), f.sha256.clone())).collect::<Vec<_>>();
    assert_eq!(sums(&ma), sums(&mb));
    assert_eq!(ma.seed, 3);
    assert_eq!(ma.rng, "ChaCha8");
    assert!(ma.config.contains("epsilon"));

    assert!(ma.verify(&a).unwrap().is_empty());
    std::fs::write(a.join("summary.csv"), "tampered\n").unwrap();
    assert_eq!(ma.verify(&a).unwrap(), vec!["summary.csv".to_string()]);
}
