//! Smooth time profiles and trapezoidal quadrature over snapshot times.

use serde::{Deserialize, Serialize};

/// Integral of (1 - s^2)^4 over [-1, 1].
const BUMP_MASS: f64 = 256.0 / 315.0;

/// Polynomial time profile with peak value 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeProfile {
    /// (1 - s^2)^4 with s = (t - center) / half_width, zero for |s| >= 1.
    Bump { center: f64, half_width: f64 },
    /// (1 - (t / width)^2)^4 on [0, width); nonzero at t = 0.
    Initial { width: f64 },
}

fn bump(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let q = 1.0 - s * s;
    (q.powi(4), -8.0 * s * q.powi(3))
}

impl TimeProfile {
    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            TimeProfile::Bump { center, half_width } => {
                let (v, d) = bump((t - center) / half_width);
                (v, d / half_width)
            }
            TimeProfile::Initial { width } => {
                if t < 0.0 {
                    return (0.0, 0.0);
                }
                let (v, d) = bump(t / width);
                (v, d / width)
            }
        }
    }

    /// Closed support interval.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            TimeProfile::Bump { center, half_width } => (center - half_width, center + half_width),
            TimeProfile::Initial { width } => (0.0, width),
        }
    }

    /// Exact integral over the real line (over [0, inf) for `Initial`).
    pub fn integral(&self) -> f64 {
        match *self {
            TimeProfile::Bump { half_width, .. } => BUMP_MASS * half_width,
            TimeProfile::Initial { width } => 0.5 * BUMP_MASS * width,
        }
    }
}

/// `count` overlapping bumps with centres (i + 1) T / (count + 1) and half
/// width T / (count + 1); each is supported inside [0, T].
pub fn bump_bank(t_end: f64, count: usize) -> Vec<TimeProfile> {
    let h = t_end / (count + 1) as f64;
    (0..count)
        .map(|i| TimeProfile::Bump {
            center: (i + 1) as f64 * h,
            half_width: h,
        })
        .collect()
}

/// Trapezoidal rule over (possibly uneven) sample times.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    assert_eq!(times.len(), values.len(), "one value per sample time");
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// Trapezoidal quadrature weights for the sample times.
pub fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 1..n {
        let h = 0.5 * (times[i] - times[i - 1]);
        w[i - 1] += h;
        w[i] += h;
    }
    w
}
