//! Homogeneous limit system
//!
//!   d_t r + div(r u) = 0,  d_t u + u . grad u + grad P + r u^perp - nu Lap u = 0,
//!
//! advanced with the same implicit midpoint rule as the full solver: constant
//! density, so the linear part is inverted exactly mode by mode, and the
//! coupling r u^perp sits inside the fixed-point iteration with the advection.
//!
//! The limit velocity has zero mean. On the torus the mean momentum of the
//! rotating system turns at frequency 1/eps and averages out, so the mean of
//! the forcing is balanced by a constant pressure gradient rather than
//! accelerating the flow.

use crate::error::{Error, Result};
use num_complex::Complex64;

use crate::kernel::{norm_sq, Kernel, Spec};
use crate::spectral::norms::{hs_norm, l2_norm, lp_norm, vector_l2_norm};
use crate::spectral::ops::{curl, divergence, gradient, laplacian};
use crate::spectral::{Grid, ScalarField, VectorField};

/// Relative update size at which the fixed-point iteration stops.
pub const HOM_TOL: f64 = 1e-13;
pub const HOM_MAX_ITER: usize = 200;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
pub struct HomLimitState {
    pub r: ScalarField,
    pub u: VectorField,
    pub t: f64,
}

impl HomLimitState {
    /// Truncates r to the dealiased band and projects u onto its mean-free
    /// divergence-free part.
    pub fn new(r: &ScalarField, u: &VectorField) -> Self {
        let k = Kernel::new(r.grid(), true);
        let (mut a, mut b) = k.band_solenoidal(u);
        a[0] = ZERO;
        b[0] = ZERO;
        HomLimitState {
            r: k.scalar(k.band(r)).into_physical(),
            u: k.vector(a, b).to_physical(),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &Grid {
        self.r.grid()
    }
}

pub struct HomStepper {
    kernel: Kernel,
    nu: f64,
    prev: Option<(Spec, Spec)>,
}

impl HomStepper {
    pub fn new(grid: &Grid, nu: f64) -> Self {
        HomStepper {
            kernel: Kernel::new(grid, true),
            nu,
            prev: None,
        }
    }

    pub fn step(&mut self, state: &HomLimitState, dt: f64) -> Result<HomLimitState> {
        let k = &self.kernel;
        let len = k.grid().len();
        let t = state.t;
        let r0 = k.band(&state.r);
        let (mut u0a, mut u0b) = k.band_solenoidal(&state.u);
        u0a[0] = ZERO;
        u0b[0] = ZERO;
        let (mut ua, mut ub) = match &self.prev {
            Some((pa, pb)) => (
                (0..len).map(|i| u0a[i] * 1.5 - pa[i] * 0.5).collect::<Spec>(),
                (0..len).map(|i| u0b[i] * 1.5 - pb[i] * 0.5).collect::<Spec>(),
            ),
            None => (u0a.clone(), u0b.clone()),
        };
        let mut r1 = r0.clone();
        let mut iterations = 0;
        loop {
            iterations += 1;
            let (up1, up2) = k.phys2(&ua, &ub);
            let rbar: Spec = (0..len).map(|i| (r0[i] + r1[i]) * 0.5).collect();
            let adv = k.transport((&up1, &up2), &rbar);
            r1 = (0..len).map(|i| r0[i] - adv[i] * dt).collect();
            let rm = k.phys(&(0..len).map(|i| (r0[i] + r1[i]) * 0.5).collect::<Spec>());
            let (b1, b2) = k.skew_advect((&up1, &up2), (&up1, &up2));
            let n1: Vec<f64> = (0..len).map(|i| b1[i] - rm[i] * up2[i]).collect();
            let n2: Vec<f64> = (0..len).map(|i| b2[i] + rm[i] * up1[i]).collect();
            let (mut s1, mut s2) = k.spec2(&n1, &n2);
            k.project(&mut s1, &mut s2);
            s1[0] = ZERO;
            s2[0] = ZERO;
            let mut upd = 0.0;
            for idx in 0..len {
                let m = 2.0 / dt + self.nu * k.ksq(idx);
                // both terms vanish outside the band
                let na = (u0a[idx] * (2.0 / dt) - s1[idx]) / m;
                let nb = (u0b[idx] * (2.0 / dt) - s2[idx]) / m;
                upd += (na - ua[idx]).norm_sqr() + (nb - ub[idx]).norm_sqr();
                ua[idx] = na;
                ub[idx] = nb;
            }
            if !upd.is_finite() {
                return Err(Error::NonFinite {
                    what: "limit velocity",
                    t,
                });
            }
            let size = norm_sq(&ua) + norm_sq(&ub);
            if upd <= HOM_TOL * HOM_TOL * size {
                break;
            }
            if iterations >= HOM_MAX_ITER {
                return Err(Error::NoConvergence {
                    solver: "limit midpoint solve",
                    iterations,
                    residual: (upd / size).sqrt(),
                    t,
                });
            }
        }
        let (up1, up2) = k.phys2(&ua, &ub);
        let umax = up1
            .iter()
            .zip(&up2)
            .map(|(a, b)| (a * a + b * b).sqrt())
            .fold(0.0, f64::max);
        let cfl = umax * dt / k.grid().h();
        if cfl > 1.0 {
            return Err(Error::Cfl { t, cfl });
        }
        let n1: Spec = (0..len).map(|i| ua[i] * 2.0 - u0a[i]).collect();
        let n2: Spec = (0..len).map(|i| ub[i] * 2.0 - u0b[i]).collect();
        self.prev = Some((u0a, u0b));
        Ok(HomLimitState {
            r: k.scalar(r1),
            u: k.vector(n1, n2),
            t: t + dt,
        })
    }
}

/// One step without extrapolated starting guess.
pub fn hom_limit_step(state: &HomLimitState, nu: f64, dt: f64) -> Result<HomLimitState> {
    HomStepper::new(state.grid(), nu).step(state, dt)
}

#[derive(Clone, Debug)]
pub struct HomTrajectory {
    pub nu: f64,
    pub snapshots: Vec<HomLimitState>,
}

impl HomTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.t).collect()
    }

    pub fn last(&self) -> &HomLimitState {
        self.snapshots.last().expect("nonempty")
    }
}

/// `steps` steps of size `dt`; snapshots every `snapshot_every` steps and at
/// the end. The final time is set to exactly `steps * dt`.
pub fn run_hom_limit(
    init: &HomLimitState,
    nu: f64,
    dt: f64,
    steps: usize,
    snapshot_every: usize,
) -> Result<HomTrajectory> {
    if snapshot_every == 0 {
        return Err(Error::InvalidArgument("snapshot_every must be at least 1".into()));
    }
    let mut stepper = HomStepper::new(init.grid(), nu);
    let mut state = init.clone();
    let t_end = dt * steps as f64;
    let mut snapshots = vec![physical(&state)];
    for n in 1..=steps {
        state = stepper.step(&state, dt)?;
        if n == steps {
            state.t = t_end;
        }
        if n % snapshot_every == 0 || n == steps {
            snapshots.push(physical(&state));
        }
    }
    Ok(HomTrajectory { nu, snapshots })
}

fn physical(s: &HomLimitState) -> HomLimitState {
    HomLimitState {
        r: s.r.to_physical(),
        u: s.u.to_physical(),
        t: s.t,
    }
}

/// Largest H^{-1} residual over snapshot pairs of
/// d_t(omega - r) + u . grad omega - nu Lap omega = 0, with a difference
/// quotient in time and the mean of the spatial terms at both ends.
pub fn hom_limit_vorticity_residual(traj: &HomTrajectory) -> f64 {
    let Some(first) = traj.snapshots.first() else {
        return 0.0;
    };
    // the solver dealiases its products, so the residual does the same
    let k = Kernel::new(first.grid(), true);
    let terms: Vec<(f64, ScalarField, ScalarField)> = traj
        .snapshots
        .iter()
        .map(|s| {
            let w = curl(&s.u);
            let gw = gradient(&w);
            let adv = k.scalar(k.band(&s.u.dot(&gw))).into_physical();
            let rhs = &(&laplacian(&w) * traj.nu) - &adv;
            (s.t, &w - &s.r, rhs)
        })
        .collect();
    terms
        .windows(2)
        .map(|p| {
            let (ta, qa, fa) = &p[0];
            let (tb, qb, fb) = &p[1];
            let dq = &(qb - qa) * (1.0 / (tb - ta));
            hs_norm(&(&dq - &(&(fa + fb) * 0.5)), -1.0)
        })
        .fold(0.0, f64::max)
}

/// Conservation diagnostics along a limit trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HomInvariants {
    /// max_t | ||r(t)||_2 - ||r_0||_2 | / ||r_0||_2
    pub r_l2_drift: f64,
    /// max_t | ||r(t)||_inf - ||r_0||_inf | / ||r_0||_inf
    pub r_linf_drift: f64,
    /// max_t (||u||^2 + nu int ||grad u||^2) / ||u_0||^2
    pub energy_ratio: f64,
    pub max_div: f64,
}

pub fn hom_invariants(traj: &HomTrajectory) -> HomInvariants {
    let s0 = &traj.snapshots[0];
    let (r2, rinf) = (l2_norm(&s0.r), lp_norm(&s0.r, f64::INFINITY));
    let rel = |a: f64, b: f64| if b > 0.0 { (a - b).abs() / b } else { a.abs() };
    let e0 = vector_l2_norm(&s0.u).powi(2);
    let times = traj.times();
    let mut dissipated = 0.0;
    let mut prev_g = grad_sq(&s0.u);
    let mut out = HomInvariants {
        r_l2_drift: 0.0,
        r_linf_drift: 0.0,
        energy_ratio: 1.0,
        max_div: 0.0,
    };
    for (i, s) in traj.snapshots.iter().enumerate() {
        out.r_l2_drift = out.r_l2_drift.max(rel(l2_norm(&s.r), r2));
        out.r_linf_drift = out.r_linf_drift.max(rel(lp_norm(&s.r, f64::INFINITY), rinf));
        out.max_div = out.max_div.max(l2_norm(&divergence(&s.u)));
        if i > 0 {
            let g = grad_sq(&s.u);
            dissipated += traj.nu * 0.5 * (times[i] - times[i - 1]) * (g + prev_g);
            prev_g = g;
            if e0 > 0.0 {
                out.energy_ratio = out
                    .energy_ratio
                    .max((vector_l2_norm(&s.u).powi(2) + dissipated) / e0);
            }
        }
    }
    out
}

fn grad_sq(u: &VectorField) -> f64 {
    vector_l2_norm(&gradient(u.x1())).powi(2) + vector_l2_norm(&gradient(u.x2())).powi(2)
}

/// |int r u^perp . u| at every snapshot.
pub fn coupling_work(traj: &HomTrajectory) -> Vec<f64> {
    traj.snapshots
        .iter()
        .map(|s| {
            let p = s.u.perp();
            crate::spectral::norms::vector_inner(&p.scale_by(&s.r), &s.u).abs()
        })
        .collect()
}
