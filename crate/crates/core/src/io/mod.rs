//! Configuration files, tables, snapshots, manifests and command outputs.

mod config;
mod manifest;
mod output;
mod snapshot;
mod table;

pub use config::{parse_config, parse_config_str, to_toml, ConfigFile, RunConfig};
pub use manifest::{sha256_file, FileEntry, Manifest, MANIFEST_NAME, RNG_NAME};
pub use output::{
    ensure_dir, limit_compare_command, render_report, run_command, sweep_command, write_lp_rows,
    write_run, write_sweep, LimitComparison,
};
pub use snapshot::{decode_snapshot, encode_snapshot, read_snapshot, write_snapshot, Snapshot, MAGIC};
pub use table::{fmt_f64, read_csv, read_ledger, write_csv, write_ledger};
