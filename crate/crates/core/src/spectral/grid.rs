use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform n x n grid on the periodic box [0, 2pi)^2 together with its FFT plans
/// and wavenumber tables.
///
/// Storage is row-major with the x1 index running fastest: the value at
/// `(x1, x2) = (i h, j h)` lives at `j * n + i`. Spectral arrays use the same
/// layout with FFT ordering, so index `i` carries wavenumber `i` for
/// `i <= n/2` and `i - n` above that.
#[derive(Clone)]
pub struct Grid {
    inner: Arc<Inner>,
}

struct Inner {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    ksq: Vec<f64>,
    resolved: Vec<bool>,
    nyquist: Vec<bool>,
}

impl Grid {
    /// Builds a grid; `n` must be a power of two, at least 16.
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "grid size must be a power of two and at least 16, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut ksq = vec![0.0; n * n];
        let mut resolved = vec![false; n * n];
        let mut nyquist = vec![false; n * n];
        let half = (n / 2) as i64;
        for j in 0..n {
            let k2 = wavenumber(n, j);
            for i in 0..n {
                let k1 = wavenumber(n, i);
                let idx = j * n + i;
                ksq[idx] = (k1 * k1 + k2 * k2) as f64;
                // two-thirds rule: keep max(|k1|, |k2|) <= n/3
                resolved[idx] = 3 * k1.abs().max(k2.abs()) <= n as i64;
                nyquist[idx] = k1 == half || k2 == half;
            }
        }
        Ok(Grid {
            inner: Arc::new(Inner {
                n,
                fwd,
                inv,
                ksq,
                resolved,
                nyquist,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    pub fn len(&self) -> usize {
        self.inner.n * self.inner.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing 2pi/n.
    pub fn h(&self) -> f64 {
        2.0 * PI / self.inner.n as f64
    }

    /// Area element of the trapezoidal quadrature, h^2.
    pub fn cell_area(&self) -> f64 {
        self.h() * self.h()
    }

    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    /// Signed wavenumber carried by FFT index `i`.
    pub fn k(&self, i: usize) -> i64 {
        wavenumber(self.inner.n, i)
    }

    /// FFT index carrying the signed wavenumber `k` (taken modulo n).
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.inner.n as i64) as usize
    }

    /// Flat index of the mode `(k1, k2)`.
    pub fn mode_index(&self, k1: i64, k2: i64) -> usize {
        self.index_of(k2) * self.inner.n + self.index_of(k1)
    }

    /// Wavevector of flat index `idx`.
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        let n = self.inner.n;
        (self.k(idx % n), self.k(idx / n))
    }

    /// Flat index of the mode `-k` for the mode stored at `idx`.
    pub fn conj_index(&self, idx: usize) -> usize {
        let n = self.inner.n;
        let (i, j) = (idx % n, idx / n);
        ((n - j) % n) * n + (n - i) % n
    }

    pub fn ksq(&self) -> &[f64] {
        &self.inner.ksq
    }

    /// Modes kept by the two-thirds dealiasing rule.
    pub fn resolved(&self) -> &[bool] {
        &self.inner.resolved
    }

    /// Modes on the Nyquist row or column.
    pub fn nyquist(&self) -> &[bool] {
        &self.inner.nyquist
    }

    /// Forward transform of a real field, normalised so that the coefficient
    /// of a constant field equals that constant.
    pub fn forward(&self, values: &[f64]) -> Vec<Complex64> {
        self.check_len(values.len());
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft2(&mut buf, false);
        let scale = 1.0 / self.len() as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Forward transform of two real fields with one complex FFT.
    pub fn forward_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        self.check_len(a.len());
        self.check_len(b.len());
        let mut z: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
        self.fft2(&mut z, false);
        let scale = 0.5 / self.len() as f64;
        let mut ah = vec![Complex64::new(0.0, 0.0); z.len()];
        let mut bh = vec![Complex64::new(0.0, 0.0); z.len()];
        for idx in 0..z.len() {
            let zk = z[idx];
            let zm = z[self.conj_index(idx)].conj();
            ah[idx] = (zk + zm) * scale;
            // (zk - zm) / (2i)
            let d = (zk - zm) * scale;
            bh[idx] = Complex64::new(d.im, -d.re);
        }
        (ah, bh)
    }

    /// Inverse transform returning the real part.
    pub fn inverse(&self, coeffs: &[Complex64]) -> Vec<f64> {
        self.check_len(coeffs.len());
        let mut buf = coeffs.to_vec();
        self.fft2(&mut buf, true);
        buf.into_iter().map(|c| c.re).collect()
    }

    /// Inverse transform of two Hermitian coefficient arrays with one complex FFT.
    pub fn inverse_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        self.check_len(a.len());
        self.check_len(b.len());
        let mut z: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
            .collect();
        self.fft2(&mut z, true);
        z.into_iter().map(|c| (c.re, c.im)).unzip()
    }

    fn check_len(&self, len: usize) {
        assert_eq!(len, self.len(), "array length does not match the grid");
    }

    fn fft2(&self, buf: &mut [Complex64], inverse: bool) {
        let n = self.inner.n;
        let plan = if inverse { &self.inner.inv } else { &self.inner.fwd };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(buf, &mut scratch);
        let mut t = vec![Complex64::new(0.0, 0.0); n * n];
        transpose(buf, &mut t, n);
        plan.process_with_scratch(&mut t, &mut scratch);
        transpose(&t, buf, n);
    }
}

fn wavenumber(n: usize, i: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const B: usize = 16;
    for jb in (0..n).step_by(B) {
        for ib in (0..n).step_by(B) {
            for j in jb..(jb + B).min(n) {
                for i in ib..(ib + B).min(n) {
                    dst[i * n + j] = src[j * n + i];
                }
            }
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.inner.n == other.inner.n
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid({}x{})", self.inner.n, self.inner.n)
    }
}
