use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsc_core::io::{self, ConfigFile, Manifest};
use nsc_core::littlewood_paley::suite::run_suite;
use nsc_core::{Error, Result};

/// Rotating variable-density Navier-Stokes on the torus: runs, epsilon
/// sweeps and limit comparisons.
///
/// Exit codes: 1 configuration error, 2 runtime failure, 3 I/O failure.
/// NSC_OUTPUT_DIR replaces the default output directory and NSC_THREADS
/// sets the number of worker threads for sweeps.
#[derive(Parser)]
#[command(name = "nsc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation from a run configuration file.
    Run {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run an epsilon sweep from a sweep configuration file.
    Sweep {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Worker threads (overrides NSC_THREADS).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Run the Littlewood-Paley property suite.
    LpTest {
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        corpus: usize,
    },
    /// Compare a run with the homogeneous limit on the same data.
    LimitCompare {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Split metrics.csv into one two-column file per metric.
    Report {
        /// metrics.csv, or a sweep directory holding it.
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn out_dir(arg: Option<PathBuf>, name: &str) -> PathBuf {
    arg.unwrap_or_else(|| {
        std::env::var_os("NSC_OUTPUT_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("nsc-output"))
            .join(name)
    })
}

fn threads(arg: Option<usize>) -> Result<Option<usize>> {
    if arg.is_some() {
        return Ok(arg);
    }
    match std::env::var("NSC_THREADS") {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::config(format!("NSC_THREADS = `{s}` is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

fn expect_run(path: &Path) -> Result<io::RunConfig> {
    match io::parse_config(path)? {
        ConfigFile::Run(c) => Ok(c),
        ConfigFile::Sweep(_) => Err(Error::config(format!(
            "{}: expected a run configuration, found [sweep]",
            path.display()
        ))),
    }
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { config, out } => {
            let cfg = expect_run(&config)?;
            let dir = out_dir(out, "run");
            let res = io::run_command(&cfg, &dir)?;
            println!(
                "run finished: {} steps of dt = {:.6e}, energy excess {:.3e}, output in {}",
                res.steps,
                res.dt,
                res.ledger.energy_excess(),
                dir.display()
            );
        }
        Command::Sweep {
            config,
            out,
            threads: t,
        } => {
            let cfg = match io::parse_config(&config)? {
                ConfigFile::Sweep(c) => c,
                ConfigFile::Run(_) => {
                    return Err(Error::config(format!(
                        "{}: expected a sweep configuration with a [sweep] table",
                        config.display()
                    )))
                }
            };
            let dir = out_dir(out, "sweep");
            let report = io::sweep_command(&cfg, &dir, threads(t)?)?;
            for r in &report.rates {
                let slope = r.slope.map(|s| format!("{s:.3}")).unwrap_or_else(|| "-".into());
                println!(
                    "{:<15} slope {:>7}  {}  ({})",
                    r.metric.name(),
                    slope,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.expectation.describe()
                );
            }
            println!("output in {}", dir.display());
        }
        Command::LpTest {
            out,
            sizes,
            seed,
            corpus,
        } => {
            let dir = out_dir(out, "lp-test");
            io::ensure_dir(&dir)?;
            let mut manifest = Manifest::start(
                "lp-test",
                format!("sizes = {sizes:?}\nseed = {seed}\ncorpus = {corpus}\n"),
                seed,
            );
            let rows = run_suite(&sizes, seed, corpus)?;
            io::write_lp_rows(&dir.join("lp.csv"), &rows)?;
            manifest.record_dir(&dir)?;
            manifest.finish();
            manifest.write(&dir)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            println!("{} property rows, {} failed, output in {}", rows.len(), failed, dir.display());
            if failed > 0 {
                return Err(Error::InvalidArgument(format!("{failed} property rows failed")));
            }
        }
        Command::LimitCompare { config, out } => {
            let cfg = expect_run(&config)?;
            let dir = out_dir(out, "limit-compare");
            let c = io::limit_compare_command(&cfg, &dir)?;
            println!(
                "strong_u {:.6e}  strong_r {:.6e}  weak_u {:.6e}, output in {}",
                c.strong_u,
                c.strong_r,
                c.weak_u,
                dir.display()
            );
        }
        Command::Report { input, out } => {
            let csv = if input.is_dir() { input.join("metrics.csv") } else { input };
            let dir = out.unwrap_or_else(|| {
                csv.parent().map(|p| p.join("report")).unwrap_or_else(|| PathBuf::from("report"))
            });
            let files = io::render_report(&csv, &dir)?;
            println!("{} metric files in {}", files.len(), dir.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
