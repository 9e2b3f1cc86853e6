use std::borrow::Cow;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

#[derive(Clone, Debug)]
enum Data {
    Physical(Vec<f64>),
    Spectral(Vec<Complex64>),
}

/// Real scalar field on the periodic grid, held either as grid values or as
/// normalised Fourier coefficients (constant `c` has zero mode `c`).
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Grid,
    data: Data,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            data: Data::Physical(vec![c; grid.len()]),
        }
    }

    /// Samples `f(x1, x2)` at the grid points.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut v = Vec::with_capacity(grid.len());
        for j in 0..n {
            let x2 = grid.coord(j);
            for i in 0..n {
                v.push(f(grid.coord(i), x2));
            }
        }
        ScalarField {
            grid: grid.clone(),
            data: Data::Physical(v),
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        Ok(ScalarField {
            grid: grid.clone(),
            data: Data::Physical(values),
        })
    }

    pub fn from_coefficients(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for a grid of {} modes",
                coeffs.len(),
                grid.len()
            )));
        }
        Ok(ScalarField {
            grid: grid.clone(),
            data: Data::Spectral(coeffs),
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn representation(&self) -> Representation {
        match self.data {
            Data::Physical(_) => Representation::Physical,
            Data::Spectral(_) => Representation::Spectral,
        }
    }

    pub fn to_spectral(&self) -> Self {
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Spectral(self.coefficients().into_owned()),
        }
    }

    pub fn to_physical(&self) -> Self {
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Physical(self.values().into_owned()),
        }
    }

    pub fn into_spectral(self) -> Self {
        match self.data {
            Data::Spectral(_) => self,
            Data::Physical(ref v) => ScalarField {
                data: Data::Spectral(self.grid.forward(v)),
                grid: self.grid,
            },
        }
    }

    pub fn into_physical(self) -> Self {
        match self.data {
            Data::Physical(_) => self,
            Data::Spectral(ref c) => ScalarField {
                data: Data::Physical(self.grid.inverse(c)),
                grid: self.grid,
            },
        }
    }

    /// Grid values, transforming if the field is held spectrally.
    pub fn values(&self) -> Cow<'_, [f64]> {
        match &self.data {
            Data::Physical(v) => Cow::Borrowed(v),
            Data::Spectral(c) => Cow::Owned(self.grid.inverse(c)),
        }
    }

    /// Normalised Fourier coefficients, transforming if needed.
    pub fn coefficients(&self) -> Cow<'_, [Complex64]> {
        match &self.data {
            Data::Spectral(c) => Cow::Borrowed(c),
            Data::Physical(v) => Cow::Owned(self.grid.forward(v)),
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        match self.data {
            Data::Physical(v) => v,
            Data::Spectral(c) => self.grid.inverse(&c),
        }
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        match self.data {
            Data::Spectral(c) => c,
            Data::Physical(v) => self.grid.forward(&v),
        }
    }

    /// Coefficient of the mode `(k1, k2)`.
    pub fn coefficient(&self, k1: i64, k2: i64) -> Complex64 {
        let idx = self.grid.mode_index(k1, k2);
        match &self.data {
            Data::Spectral(c) => c[idx],
            Data::Physical(v) => self.grid.forward(v)[idx],
        }
    }

    /// Pointwise map on grid values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let v = self.values().iter().map(|&x| f(x)).collect();
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Physical(v),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Self {
        self.assert_same_grid(other);
        let a = self.values();
        let b = other.values();
        let v = a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect();
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Physical(v),
        }
    }

    /// Applies a real multiplier per mode, returning a spectral field.
    pub fn apply_multiplier(&self, m: impl Fn(usize) -> f64) -> Self {
        let mut c = self.coefficients().into_owned();
        for (idx, z) in c.iter_mut().enumerate() {
            *z *= m(idx);
        }
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Spectral(c),
        }
    }

    /// Applies a complex multiplier per mode, returning a spectral field.
    pub fn apply_complex_multiplier(&self, m: impl Fn(usize) -> Complex64) -> Self {
        let mut c = self.coefficients().into_owned();
        for (idx, z) in c.iter_mut().enumerate() {
            *z *= m(idx);
        }
        ScalarField {
            grid: self.grid.clone(),
            data: Data::Spectral(c),
        }
    }

    /// Mean value (the zero mode).
    pub fn mean(&self) -> f64 {
        match &self.data {
            Data::Spectral(c) => c[0].re,
            Data::Physical(v) => v.iter().sum::<f64>() / v.len() as f64,
        }
    }

    /// Integral over the torus.
    pub fn integral(&self) -> f64 {
        self.mean() * (2.0 * std::f64::consts::PI).powi(2)
    }

    pub fn max(&self) -> f64 {
        self.values().iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, &x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        match &self.data {
            Data::Physical(v) => v.iter().all(|x| x.is_finite()),
            Data::Spectral(c) => c.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        match &self.data {
            Data::Physical(v) => ScalarField {
                grid: self.grid.clone(),
                data: Data::Physical(v.iter().map(|x| x * s).collect()),
            },
            Data::Spectral(c) => ScalarField {
                grid: self.grid.clone(),
                data: Data::Spectral(c.iter().map(|z| z * s).collect()),
            },
        }
    }

    /// Pointwise product on the grid (no dealiasing).
    pub fn pointwise_mul(&self, other: &ScalarField) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub(crate) fn assert_same_grid(&self, other: &ScalarField) {
        assert!(
            self.grid == other.grid,
            "fields live on different grids ({:?} vs {:?})",
            self.grid,
            other.grid
        );
    }

    fn combine(&self, other: &ScalarField, sign: f64) -> ScalarField {
        self.assert_same_grid(other);
        match (&self.data, &other.data) {
            (Data::Spectral(a), Data::Spectral(b)) => ScalarField {
                grid: self.grid.clone(),
                data: Data::Spectral(a.iter().zip(b).map(|(x, y)| x + y * sign).collect()),
            },
            _ => self.zip_with(other, |x, y| x + sign * y),
        }
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.combine(rhs, -1.0)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scale(rhs)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

/// Two-component vector field; both components share a grid.
#[derive(Clone, Debug)]
pub struct VectorField {
    comps: [ScalarField; 2],
}

impl VectorField {
    pub fn new(u1: ScalarField, u2: ScalarField) -> Result<Self> {
        if u1.grid() != u2.grid() {
            return Err(Error::GridMismatch(
                "vector components on different grids".into(),
            ));
        }
        Ok(VectorField { comps: [u1, u2] })
    }

    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            comps: [ScalarField::zeros(grid), ScalarField::zeros(grid)],
        }
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        VectorField {
            comps: [
                ScalarField::from_fn(grid, |x, y| f(x, y).0),
                ScalarField::from_fn(grid, |x, y| f(x, y).1),
            ],
        }
    }

    pub fn grid(&self) -> &Grid {
        self.comps[0].grid()
    }

    pub fn x1(&self) -> &ScalarField {
        &self.comps[0]
    }

    pub fn x2(&self) -> &ScalarField {
        &self.comps[1]
    }

    pub fn comp(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn into_components(self) -> (ScalarField, ScalarField) {
        let [a, b] = self.comps;
        (a, b)
    }

    pub fn to_spectral(&self) -> Self {
        VectorField {
            comps: [self.comps[0].to_spectral(), self.comps[1].to_spectral()],
        }
    }

    pub fn to_physical(&self) -> Self {
        VectorField {
            comps: [self.comps[0].to_physical(), self.comps[1].to_physical()],
        }
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        VectorField {
            comps: [f(&self.comps[0]), f(&self.comps[1])],
        }
    }

    /// The rotated field u^perp = (-u2, u1).
    pub fn perp(&self) -> Self {
        VectorField {
            comps: [-&self.comps[1], self.comps[0].clone()],
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_components(|c| c.scale(s))
    }

    /// Scales both components pointwise by a scalar field.
    pub fn scale_by(&self, a: &ScalarField) -> Self {
        self.map_components(|c| c.pointwise_mul(a))
    }

    pub fn dot(&self, other: &VectorField) -> ScalarField {
        let a = self.comps[0].pointwise_mul(&other.comps[0]);
        let b = self.comps[1].pointwise_mul(&other.comps[1]);
        &a + &b
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        self.comps[0].zip_with(&self.comps[1], |a, b| a.hypot(b))
    }

    /// Largest pointwise magnitude.
    pub fn max_abs(&self) -> f64 {
        self.magnitude().max()
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: [&self.comps[0] + &rhs.comps[0], &self.comps[1] + &rhs.comps[1]],
        }
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: [&self.comps[0] - &rhs.comps[0], &self.comps[1] - &rhs.comps[1]],
        }
    }
}

impl Mul<f64> for &VectorField {
    type Output = VectorField;
    fn mul(self, rhs: f64) -> VectorField {
        self.scale(rhs)
    }
}
