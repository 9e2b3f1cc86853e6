use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField};

/// Smooth radial cut-off: 1 on [0, 1], 0 on [2, inf), exp-mollifier in between.
pub fn chi(r: f64) -> f64 {
    if r <= 1.0 {
        1.0
    } else if r >= 2.0 {
        0.0
    } else {
        let a = bump(2.0 - r);
        let b = bump(r - 1.0);
        a / (a + b)
    }
}

fn bump(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// Dyadic partition of unity on the lattice of a grid.
///
/// Block `-1` is `chi(|k|)`; block `j` in `0..j_max` is
/// `chi(2^{-j-1}|k|) - chi(2^{-j}|k|)`, supported in `2^j <= |k| <= 2^{j+2}`;
/// the top block `j_max` is `1 - chi(2^{-j_max}|k|)` and absorbs everything
/// up to the corner of the lattice. The blocks therefore sum to one on every
/// mode up to rounding.
#[derive(Clone, Debug)]
pub struct DyadicDecomposition {
    grid: Grid,
    j_max: i32,
    // multipliers[j + 1] holds block j
    multipliers: Vec<Vec<f64>>,
}

impl DyadicDecomposition {
    pub fn new(grid: &Grid) -> Self {
        // smallest j_max with 2^{j_max + 1} >= n/2
        let j_max = (grid.n() / 2).trailing_zeros() as i32 - 1;
        let radius: Vec<f64> = grid.ksq().iter().map(|k2| k2.sqrt()).collect();
        let dilated = |j: i32| -> Vec<f64> {
            let s = 2f64.powi(-j);
            radius.iter().map(|&r| chi(s * r)).collect()
        };
        let mut multipliers = Vec::with_capacity(j_max as usize + 2);
        multipliers.push(dilated(0));
        for j in 0..j_max {
            let outer = dilated(j + 1);
            let inner = dilated(j);
            multipliers.push(outer.iter().zip(&inner).map(|(a, b)| a - b).collect());
        }
        multipliers.push(dilated(j_max).iter().map(|c| 1.0 - c).collect());
        DyadicDecomposition {
            grid: grid.clone(),
            j_max,
            multipliers,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Block indices `-1..=j_max`.
    pub fn indices(&self) -> std::ops::RangeInclusive<i32> {
        -1..=self.j_max
    }

    /// Spectral multiplier of block `j`.
    pub fn multiplier(&self, j: i32) -> Result<&[f64]> {
        self.check_index(j)?;
        Ok(&self.multipliers[(j + 1) as usize])
    }

    /// Radial range `[lo, hi]` outside which block `j` vanishes.
    pub fn support(&self, j: i32) -> Result<(f64, f64)> {
        self.check_index(j)?;
        Ok(match j {
            -1 => (0.0, 2.0),
            j if j == self.j_max => (2f64.powi(j), f64::INFINITY),
            j => (2f64.powi(j), 2f64.powi(j + 2)),
        })
    }

    fn check_index(&self, j: i32) -> Result<()> {
        if j < -1 || j > self.j_max {
            return Err(Error::InvalidArgument(format!(
                "dyadic block {j} outside -1..={}",
                self.j_max
            )));
        }
        Ok(())
    }

    /// Delta_j u.
    pub fn block(&self, u: &ScalarField, j: i32) -> Result<ScalarField> {
        let m = self.multiplier(j)?;
        Ok(u.apply_multiplier(|idx| m[idx]))
    }

    /// All blocks `-1..=j_max`, in order.
    pub fn blocks(&self, u: &ScalarField) -> Vec<ScalarField> {
        self.indices()
            .map(|j| self.block(u, j).expect("index in range"))
            .collect()
    }

    /// Multiplier of S_M = sum of the blocks below M.
    pub fn low_pass_multiplier(&self, m: i32) -> Vec<f64> {
        let mut acc = vec![0.0; self.grid.len()];
        for j in -1..m.min(self.j_max + 1) {
            for (a, b) in acc.iter_mut().zip(&self.multipliers[(j + 1) as usize]) {
                *a += b;
            }
        }
        acc
    }

    /// S_M u; zero for M <= -1 and the identity once M exceeds j_max.
    pub fn low_pass(&self, u: &ScalarField, m: i32) -> ScalarField {
        let mult = self.low_pass_multiplier(m);
        u.apply_multiplier(|idx| mult[idx])
    }
}
