use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised anywhere in the library.
///
/// The variants split into configuration problems (rejected before any work
/// starts), numerical failures during a run, and I/O failures; the CLI maps
/// these groups onto distinct exit codes via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("density fell to {min:.6e} at t = {t:.6}, below the floor {floor:.6e}")]
    DensityFloor { t: f64, min: f64, floor: f64 },

    #[error("{solver} did not converge after {iterations} iterations (residual {residual:.3e}) at t = {t:.6}")]
    NoConvergence {
        solver: &'static str,
        iterations: usize,
        residual: f64,
        t: f64,
    },

    #[error("CFL number {cfl:.3} exceeds 1 at t = {t:.6}")]
    Cfl { t: f64, cfl: f64 },

    #[error("non-finite values in {what} at t = {t:.6}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code: 1 for configuration errors, 3 for I/O, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. } | Error::Format { .. } => 3,
            _ => 2,
        }
    }
}
