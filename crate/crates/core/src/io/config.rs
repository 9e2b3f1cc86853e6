//! Strict TOML configuration files.
//!
//! A run file holds `[simulation]` and `[initial]`; a sweep file holds
//! `[sweep]`, `[base]` and `[initial]`. Every table is optional and missing
//! keys take their defaults, but unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{Metric, SweepConfig};
use crate::nsc::{InitialSpec, SimConfig};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub simulation: SimConfig,
    pub initial: InitialSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigFile {
    Run(RunConfig),
    Sweep(SweepConfig),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Layout {
    simulation: Option<SimConfig>,
    initial: Option<InitialSpec>,
    sweep: Option<SweepSection>,
    base: Option<SimConfig>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    epsilons: Option<Vec<f64>>,
    metrics: Option<Vec<Metric>>,
    weak_modes: Option<f64>,
    windows: Option<usize>,
    theta: Option<f64>,
    seed: Option<u64>,
}

fn parse_layout(text: &str) -> Result<Layout> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::config(e.to_string()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        let inner = inner.trim_end();
        if path.is_empty() || path == "." {
            Error::config(inner.to_string())
        } else {
            Error::config(format!("at `{path}`: {inner}"))
        }
    })
}

/// Parses and validates configuration text.
pub fn parse_config_str(text: &str) -> Result<ConfigFile> {
    let layout = parse_layout(text)?;
    match layout.sweep {
        None => {
            if layout.base.is_some() {
                return Err(Error::config("table [base] is only allowed with [sweep]"));
            }
            let cfg = RunConfig {
                simulation: layout.simulation.unwrap_or_default(),
                initial: layout.initial.unwrap_or_default(),
            };
            cfg.simulation.validate_at("simulation.")?;
            Ok(ConfigFile::Run(cfg))
        }
        Some(s) => {
            if layout.simulation.is_some() {
                return Err(Error::config(
                    "a sweep file takes its run template from [base], not [simulation]",
                ));
            }
            let d = SweepConfig::default();
            let cfg = SweepConfig {
                epsilons: s.epsilons.unwrap_or(d.epsilons),
                base: layout.base.unwrap_or(d.base),
                initial: layout.initial.unwrap_or_default(),
                metrics: s.metrics,
                weak_modes: s.weak_modes.unwrap_or(d.weak_modes),
                windows: s.windows.unwrap_or(d.windows),
                theta: s.theta.unwrap_or(d.theta),
                seed: s.seed.unwrap_or(d.seed),
            };
            cfg.validate()?;
            Ok(ConfigFile::Sweep(cfg))
        }
    }
}

/// Reads, parses and validates a configuration file.
pub fn parse_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// TOML text of a run configuration, for echoing into manifests.
pub fn to_toml<T: Serialize>(cfg: &T) -> String {
    toml::to_string(cfg).unwrap_or_default()
}
