//! Array-level spectral helpers shared by the two time steppers.
//!
//! The steppers work on raw coefficient and value arrays rather than on
//! [`ScalarField`]s so that every transform is explicit and paired.

use num_complex::Complex64;

use crate::spectral::{Grid, ScalarField, VectorField};

pub(crate) type Spec = Vec<Complex64>;
pub(crate) type Phys = Vec<f64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) struct Kernel {
    grid: Grid,
    k1: Vec<f64>,
    k2: Vec<f64>,
    ksq: Vec<f64>,
    keep: Vec<bool>,
}

impl Kernel {
    /// `dealias` selects the two-thirds band as the discrete velocity space;
    /// without it only the Nyquist modes are removed.
    pub fn new(grid: &Grid, dealias: bool) -> Self {
        let len = grid.len();
        let (mut k1, mut k2) = (vec![0.0; len], vec![0.0; len]);
        let mut keep = vec![false; len];
        let (nyq, res) = (grid.nyquist(), grid.resolved());
        for idx in 0..len {
            if nyq[idx] {
                continue;
            }
            let (a, b) = grid.wavevector(idx);
            k1[idx] = a as f64;
            k2[idx] = b as f64;
            keep[idx] = !dealias || res[idx];
        }
        Kernel {
            grid: grid.clone(),
            k1,
            k2,
            ksq: grid.ksq().to_vec(),
            keep,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn ksq(&self, idx: usize) -> f64 {
        self.ksq[idx]
    }

    pub fn phys(&self, a: &[Complex64]) -> Phys {
        self.grid.inverse(a)
    }

    pub fn phys2(&self, a: &[Complex64], b: &[Complex64]) -> (Phys, Phys) {
        self.grid.inverse_pair(a, b)
    }

    pub fn spec(&self, a: &[f64]) -> Spec {
        self.grid.forward(a)
    }

    pub fn spec2(&self, a: &[f64], b: &[f64]) -> (Spec, Spec) {
        self.grid.forward_pair(a, b)
    }

    /// Zeroes every mode outside the discrete band.
    pub fn truncate(&self, a: &mut [Complex64]) {
        for (z, &k) in a.iter_mut().zip(&self.keep) {
            if !k {
                *z = ZERO;
            }
        }
    }

    /// Leray projection followed by truncation to the band.
    pub fn project(&self, a: &mut [Complex64], b: &mut [Complex64]) {
        for idx in 0..a.len() {
            if !self.keep[idx] {
                a[idx] = ZERO;
                b[idx] = ZERO;
            } else if idx != 0 {
                let (k1, k2) = (self.k1[idx], self.k2[idx]);
                let kdu = (a[idx] * k1 + b[idx] * k2) / self.ksq[idx];
                a[idx] -= kdu * k1;
                b[idx] -= kdu * k2;
            }
        }
    }

    /// Physical gradient of a spectral scalar.
    pub fn grad_phys(&self, a: &[Complex64]) -> (Phys, Phys) {
        let (mut d1, mut d2) = (vec![ZERO; a.len()], vec![ZERO; a.len()]);
        for idx in 0..a.len() {
            let ia = Complex64::new(-a[idx].im, a[idx].re);
            d1[idx] = ia * self.k1[idx];
            d2[idx] = ia * self.k2[idx];
        }
        self.phys2(&d1, &d2)
    }

    /// Spectral divergence of the physical flux (f1, f2).
    fn div_spec(&self, f1: &[f64], f2: &[f64]) -> Spec {
        let (a, b) = self.spec2(f1, f2);
        a.iter()
            .zip(&b)
            .enumerate()
            .map(|(idx, (x, y))| {
                let s = x * self.k1[idx] + y * self.k2[idx];
                Complex64::new(-s.im, s.re)
            })
            .collect()
    }

    /// Skew-symmetric advection B(u) f = (u . grad f + div(u f)) / 2 applied to
    /// each component of f, on the grid and without truncation. For every grid
    /// field g the sum over the grid of B(u)g . g vanishes up to rounding.
    pub fn skew_advect(&self, u: (&[f64], &[f64]), f: (&[f64], &[f64])) -> (Phys, Phys) {
        let (fh1, fh2) = self.spec2(f.0, f.1);
        let (d11, d21) = self.grad_phys(&fh1);
        let (d12, d22) = self.grad_phys(&fh2);
        let len = u.0.len();
        let flux = |fc: &[f64]| -> (Phys, Phys) {
            ((0..len).map(|i| u.0[i] * fc[i]).collect(), (0..len).map(|i| u.1[i] * fc[i]).collect())
        };
        let (a1, a2) = flux(f.0);
        let (b1, b2) = flux(f.1);
        let div1 = self.div_spec(&a1, &a2);
        let div2 = self.div_spec(&b1, &b2);
        let (dv1, dv2) = self.phys2(&div1, &div2);
        let out1 = (0..len)
            .map(|i| 0.5 * (u.0[i] * d11[i] + u.1[i] * d21[i] + dv1[i]))
            .collect();
        let out2 = (0..len)
            .map(|i| 0.5 * (u.0[i] * d12[i] + u.1[i] * d22[i] + dv2[i]))
            .collect();
        (out1, out2)
    }

    /// Truncated transport term P(u . grad rho) for a spectral scalar.
    pub fn transport(&self, u: (&[f64], &[f64]), rho: &[Complex64]) -> Spec {
        let (g1, g2) = self.grad_phys(rho);
        let a: Phys = (0..g1.len()).map(|i| u.0[i] * g1[i] + u.1[i] * g2[i]).collect();
        let mut s = self.spec(&a);
        self.truncate(&mut s);
        s
    }

    /// Grid integral of |grad u|^2 for spectral components.
    pub fn grad_sq(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        let area = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
        let s: f64 = (0..a.len())
            .map(|idx| {
                let k2 = self.k1[idx] * self.k1[idx] + self.k2[idx] * self.k2[idx];
                k2 * (a[idx].norm_sqr() + b[idx].norm_sqr())
            })
            .sum();
        area * s
    }

    pub fn scalar(&self, a: Spec) -> ScalarField {
        ScalarField::from_coefficients(&self.grid, a).expect("length matches")
    }

    pub fn vector(&self, a: Spec, b: Spec) -> VectorField {
        VectorField::new(self.scalar(a), self.scalar(b)).expect("same grid")
    }

    /// Truncated spectral coefficients of a scalar field.
    pub fn band(&self, f: &ScalarField) -> Spec {
        let mut c = f.coefficients().into_owned();
        self.truncate(&mut c);
        c
    }

    /// Projected spectral coefficients of a vector field.
    pub fn band_solenoidal(&self, u: &VectorField) -> (Spec, Spec) {
        let mut a = u.x1().coefficients().into_owned();
        let mut b = u.x2().coefficients().into_owned();
        self.project(&mut a, &mut b);
        (a, b)
    }
}

/// Sum of squared moduli, used for relative update sizes.
pub(crate) fn norm_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Grid quadrature of a * b.
pub(crate) fn grid_dot(grid: &Grid, a: &[f64], b: &[f64]) -> f64 {
    grid.cell_area() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>()
}
