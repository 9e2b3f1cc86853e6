//! Binary snapshots of a solver state.
//!
//! Layout, all little-endian: the 8-byte magic, n as u32, then t, eps and nu
//! as f64, then rho, u1 and u2, each as a representation byte (0 grid
//! values, 1 Fourier coefficients) followed by n^2 f64 values or n^2
//! (re, im) pairs. Fields are written in the representation they hold, so a
//! round trip reproduces them bit for bit.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::nsc::State;
use crate::spectral::{Grid, Representation, ScalarField, VectorField};

pub const MAGIC: &[u8; 8] = b"NSCSNAP1";

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub state: State,
    pub epsilon: f64,
    pub nu: f64,
}

fn put_field(out: &mut Vec<u8>, f: &ScalarField) {
    match f.representation() {
        Representation::Physical => {
            out.push(0);
            for v in f.values().iter() {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        Representation::Spectral => {
            out.push(1);
            for z in f.coefficients().iter() {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }
        }
    }
}

pub fn encode_snapshot(state: &State, epsilon: f64, nu: f64) -> Vec<u8> {
    let n = state.rho.grid().n();
    let mut out = Vec::with_capacity(40 + 3 * (1 + 16 * n * n));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    for x in [state.t, epsilon, nu] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    put_field(&mut out, &state.rho);
    put_field(&mut out, state.u.x1());
    put_field(&mut out, state.u.x2());
    out
}

pub fn write_snapshot(path: &Path, state: &State, epsilon: f64, nu: f64) -> Result<()> {
    let bytes = encode_snapshot(state, epsilon, nu);
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        if self.pos + k > self.buf.len() {
            return Err(Error::Format {
                what: "snapshot",
                detail: format!("truncated at byte {}", self.pos),
            });
        }
        let s = &self.buf[self.pos..self.pos + k];
        self.pos += k;
        Ok(s)
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn field(&mut self, grid: &Grid) -> Result<ScalarField> {
        let len = grid.len();
        match self.take(1)?[0] {
            0 => {
                let v = (0..len).map(|_| self.f64()).collect::<Result<Vec<_>>>()?;
                ScalarField::from_values(grid, v)
            }
            1 => {
                let c = (0..len)
                    .map(|_| Ok(Complex64::new(self.f64()?, self.f64()?)))
                    .collect::<Result<Vec<_>>>()?;
                ScalarField::from_coefficients(grid, c)
            }
            b => Err(Error::Format {
                what: "snapshot",
                detail: format!("unknown representation byte {b}"),
            }),
        }
    }
}

pub fn decode_snapshot(bytes: &[u8]) -> Result<Snapshot> {
    let mut c = Cursor { buf: bytes, pos: 0 };
    if c.take(8)? != MAGIC {
        return Err(Error::Format {
            what: "snapshot",
            detail: "bad magic".into(),
        });
    }
    let n = u32::from_le_bytes(c.take(4)?.try_into().expect("4 bytes")) as usize;
    let grid = Grid::new(n).map_err(|e| Error::Format {
        what: "snapshot",
        detail: e.to_string(),
    })?;
    let (t, epsilon, nu) = (c.f64()?, c.f64()?, c.f64()?);
    let rho = c.field(&grid)?;
    let u1 = c.field(&grid)?;
    let u2 = c.field(&grid)?;
    if c.pos != bytes.len() {
        return Err(Error::Format {
            what: "snapshot",
            detail: format!("{} trailing bytes", bytes.len() - c.pos),
        });
    }
    Ok(Snapshot {
        state: State {
            rho,
            u: VectorField::new(u1, u2)?,
            t,
        },
        epsilon,
        nu,
    })
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(path, e))?;
    decode_snapshot(&bytes).map_err(|e| match e {
        Error::Format { what, detail } => Error::Format {
            what,
            detail: format!("{}: {detail}", path.display()),
        },
        other => other,
    })
}
