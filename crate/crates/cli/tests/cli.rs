use std::path::Path;
use std::process::{Command, Output};

use nsc_core::io::Manifest;

fn nsc(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nsc"));
    cmd.args(args).env_remove("NSC_OUTPUT_DIR").env_remove("NSC_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SHEAR: &str = "[simulation]\nepsilon = 0.1\nn = 16\nt_end = 0.05\n\n[initial]\nrho_ref = { kind = \"constant\" }\nr0 = { kind = \"zero\" }\nu0 = { kind = \"shear\", amplitude = 1.0 }\n";

#[test]
fn run_writes_a_ledger() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SHEAR);
    let out_dir = dir.path().join("out");
    let out = nsc(&["run", "--config", &cfg, "--out", out_dir.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["ledger.csv", "summary.csv", "manifest.json", "snapshots/snap_00000.bin"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
}

#[test]
fn output_directory_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SHEAR);
    let root = dir.path().join("root");
    let out = nsc(&["run", "--config", &cfg], &[("NSC_OUTPUT_DIR", &root)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(root.join("run/ledger.csv").exists());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", "[simulation]\nepsilon = 0.0\n");
    let out = nsc(&["run", "--config", &bad], &[("NSC_OUTPUT_DIR", dir.path())]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1]"));

    let missing = dir.path().join("missing.toml");
    let out = nsc(&["run", "--config", missing.to_str().unwrap()], &[("NSC_OUTPUT_DIR", dir.path())]);
    assert_eq!(code(&out), 3);

    let metrics = write(dir.path(), "metrics.csv", "metric,epsilon,value\n");
    let out = nsc(&["report", &metrics, "--out", dir.path().join("rep").to_str().unwrap()], &[]);
    assert_eq!(code(&out), 2);

    assert_eq!(code(&nsc(&["frobnicate"], &[])), 1);
    assert_eq!(code(&nsc(&["--help"], &[])), 0);

    // a run file handed to sweep
    let run = write(dir.path(), "run.toml", SHEAR);
    assert_eq!(code(&nsc(&["sweep", "--config", &run], &[("NSC_OUTPUT_DIR", dir.path())])), 1);
}

#[test]
fn lp_test_writes_its_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("lp");
    let out = nsc(
        &["lp-test", "--sizes", "64", "--corpus", "2", "--out", out_dir.to_str().unwrap()],
        &[],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(out_dir.join("lp.csv")).unwrap();
    assert!(text.lines().count() > 1);
    assert!(out_dir.join("manifest.json").exists());
}

const SWEEP: &str = "[sweep]\nepsilons = [0.2, 0.1, 0.05]\nwindows = 2\n\n[base]\nn = 16\nt_end = 0.1\n\n[initial]\nrho_ref = { kind = \"constant\" }\n";

#[test]
fn sweep_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.toml", SWEEP);
    let out_dir = dir.path().join("sweep");
    let out = nsc(
        &["sweep", "--config", &cfg, "--out", out_dir.to_str().unwrap(), "--threads", "2"],
        &[],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["metrics.csv", "rates.csv", "runs.csv", "manifest.json"] {
        assert!(out_dir.join(f).exists(), "{f}");
    }
    let rep = dir.path().join("rep");
    let out = nsc(&["report", out_dir.to_str().unwrap(), "--out", rep.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(rep.join("strong_u.dat").exists());
}

#[test]
fn limit_compare_on_shear() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", SHEAR);
    let out_dir = dir.path().join("cmp");
    let out = nsc(&["limit-compare", "--config", &cfg, "--out", out_dir.to_str().unwrap()], &[]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("compare.csv").exists());
}

#[test]
fn repeated_runs_have_identical_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "sweep.toml", SWEEP);
    let sums: Vec<String> = ["a", "b"]
        .iter()
        .map(|name| {
            let d = dir.path().join(name);
            let out = nsc(&["sweep", "--config", &cfg, "--out", d.to_str().unwrap()], &[("NSC_THREADS", Path::new("1"))]);
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
            let m = Manifest::read(&d.join("manifest.json")).unwrap();
            m.files.iter().map(|f| format!("{} {}\n", f.path, f.sha256)).collect()
        })
        .collect();
    assert_eq!(sums[0], sums[1]);
}
