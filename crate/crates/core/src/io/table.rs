//! CSV tables with a header row and round-trippable floats.

use std::path::Path;

use crate::error::{Error, Result};
use crate::nsc::{EnergyLedger, LedgerRow};

/// 17 significant digits, enough to recover every f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            what: "csv",
            detail: format!("{}: {other:?}", path.display()),
        },
    }
}

pub fn write_csv<S: AsRef<str>>(path: &Path, header: &[&str], rows: &[Vec<S>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record(r.iter().map(|c| c.as_ref())).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Header and rows of a CSV file.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = r
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

pub fn write_ledger(path: &Path, ledger: &EnergyLedger) -> Result<()> {
    let rows: Vec<Vec<String>> = ledger
        .rows
        .iter()
        .map(|r| {
            vec![
                r.step.to_string(),
                fmt_f64(r.t),
                fmt_f64(r.kinetic),
                fmt_f64(r.dissipation),
                fmt_f64(r.projection_loss),
                fmt_f64(r.coriolis_work),
                fmt_f64(r.mass),
                fmt_f64(r.rho_min),
                fmt_f64(r.rho_max),
                fmt_f64(r.div_residual),
                r.iterations.to_string(),
                r.projection_iterations.to_string(),
            ]
        })
        .collect();
    write_csv(path, &LedgerRow::HEADER, &rows)
}

fn field<T: std::str::FromStr>(path: &Path, line: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::Format {
        what: "ledger",
        detail: format!("{} row {line}: cannot parse `{s}`", path.display()),
    })
}

pub fn read_ledger(path: &Path) -> Result<EnergyLedger> {
    let (header, rows) = read_csv(path)?;
    if header != LedgerRow::HEADER {
        return Err(Error::Format {
            what: "ledger",
            detail: format!("{}: unexpected header {header:?}", path.display()),
        });
    }
    let mut ledger = EnergyLedger::default();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != LedgerRow::HEADER.len() {
            return Err(Error::Format {
                what: "ledger",
                detail: format!("{} row {}: {} columns", path.display(), i + 1, r.len()),
            });
        }
        let f = |j: usize| field::<f64>(path, i + 1, &r[j]);
        ledger.rows.push(LedgerRow {
            step: field(path, i + 1, &r[0])?,
            t: f(1)?,
            kinetic: f(2)?,
            dissipation: f(3)?,
            projection_loss: f(4)?,
            coriolis_work: f(5)?,
            mass: f(6)?,
            rho_min: f(7)?,
            rho_max: f(8)?,
            div_residual: f(9)?,
            iterations: field(path, i + 1, &r[10])?,
            projection_iterations: field(path, i + 1, &r[11])?,
        });
    }
    Ok(ledger)
}
