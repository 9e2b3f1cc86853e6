//! Time step for the rotating variable-density system.
//!
//! The momentum equation is advanced in the weighted variable w = sqrt(rho) u
//! by an implicit midpoint rule. With s = (sqrt(rho^n) + sqrt(rho^{n+1})) / 2
//! and the midpoint velocity ub in the discrete divergence-free band, the step
//! solves
//!
//!   P[(2 s^2 / dt) ub + (s^2 / eps) ub^perp + s B(ub)(s ub)] - nu Lap ub
//!     = P[2 s w^n / dt],
//!
//! sets w* = 2 s ub - w^n and takes for u^{n+1} the rho^{n+1}-weighted
//! projection of w* / sqrt(rho^{n+1}) onto the band. The density follows the
//! midpoint transport rho^{n+1} = rho^n - dt P(ub . grad rhob).
//!
//! Testing with ub shows ||w*||^2 = ||w^n||^2 - 2 nu dt ||grad ub||^2 exactly
//! (the advection form B is skew and ub^perp . ub = 0), and the projection can
//! only lower the energy. Both the nonlinear system and the projection are
//! solved by Richardson iteration preconditioned with the constant-density
//! operator.

use num_complex::Complex64;

use super::config::SimConfig;
use super::state::State;
use crate::error::{Error, Result};
use crate::kernel::{grid_dot, norm_sq, Kernel, Phys, Spec};
use crate::spectral::{Grid, VectorField};

/// Upper bound on the relative update size accepted by the iterations.
const TIGHT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepReport {
    pub dissipation: f64,
    pub projection_loss: f64,
    pub coriolis_work: f64,
    pub iterations: usize,
    pub projection_iterations: usize,
}

pub struct Stepper {
    cfg: SimConfig,
    kernel: Kernel,
    prev: Option<(Spec, Spec)>,
}

fn combine(a: &[Complex64], b: &[Complex64], x: f64, y: f64) -> Spec {
    a.iter().zip(b).map(|(p, q)| p * x + q * y).collect()
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

fn converged(update: f64, size: f64, tol: f64) -> bool {
    update <= tol * tol * size
}

impl Stepper {
    pub fn new(cfg: &SimConfig, grid: &Grid) -> Self {
        Stepper {
            cfg: cfg.clone(),
            kernel: Kernel::new(grid, cfg.dealias),
            prev: None,
        }
    }

    fn density_update(&self, rho0: &[Complex64], adv: &[Complex64], dt: f64) -> Spec {
        let kappa = self.cfg.hyperdiffusion;
        (0..rho0.len())
            .map(|idx| {
                if kappa == 0.0 {
                    rho0[idx] - adv[idx] * dt
                } else {
                    let k2 = self.kernel.ksq(idx);
                    let a = 0.5 * kappa * dt * k2 * k2;
                    (rho0[idx] * (1.0 - a) - adv[idx] * dt) / (1.0 + a)
                }
            })
            .collect()
    }

    /// Advances `state` by `dt`.
    pub fn step(&mut self, state: &State, dt: f64) -> Result<(State, StepReport)> {
        let k = &self.kernel;
        let grid = k.grid().clone();
        let len = grid.len();
        let (eps, nu, t) = (self.cfg.epsilon, self.cfg.nu, state.t);
        let max_iter = self.cfg.elliptic_max_iter;
        let tol = self.cfg.elliptic_tol.min(TIGHT_TOL);

        let rho0_s = state.rho.coefficients().into_owned();
        let rho0_p = state.rho.values().into_owned();
        let (mut u0a, mut u0b) = (
            state.u.x1().coefficients().into_owned(),
            state.u.x2().coefficients().into_owned(),
        );
        k.project(&mut u0a, &mut u0b);
        let (u0p1, u0p2) = k.phys2(&u0a, &u0b);
        let sig0: Phys = rho0_p.iter().map(|r| r.sqrt()).collect();
        let w01: Phys = (0..len).map(|i| sig0[i] * u0p1[i]).collect();
        let w02: Phys = (0..len).map(|i| sig0[i] * u0p2[i]).collect();

        let (mut ua, mut ub) = match &self.prev {
            Some((pa, pb)) => (combine(&u0a, pa, 1.5, -0.5), combine(&u0b, pb, 1.5, -0.5)),
            None => (u0a.clone(), u0b.clone()),
        };
        let (lo, hi) = min_max(&rho0_p);
        let rc = 0.5 * (lo + hi);
        let a = dt / (2.0 * eps);
        let diag = 2.0 * rc / dt;

        let mut rho1_s = rho0_s.clone();
        let mut rho1_p: Phys;
        let mut sh = sig0.clone();
        let mut iterations = 0;
        loop {
            iterations += 1;
            let (up1, up2) = k.phys2(&ua, &ub);
            let rbar = combine(&rho0_s, &rho1_s, 0.5, 0.5);
            let adv = k.transport((&up1, &up2), &rbar);
            rho1_s = self.density_update(&rho0_s, &adv, dt);
            rho1_p = k.phys(&rho1_s);
            for i in 0..len {
                sh[i] = 0.5 * (sig0[i] + rho1_p[i].max(0.0).sqrt());
            }
            let f1: Phys = (0..len).map(|i| sh[i] * up1[i]).collect();
            let f2: Phys = (0..len).map(|i| sh[i] * up2[i]).collect();
            let (b1, b2) = k.skew_advect((&up1, &up2), (&f1, &f2));
            let mut g1 = vec![0.0; len];
            let mut g2 = vec![0.0; len];
            for i in 0..len {
                let rh = sh[i] * sh[i];
                g1[i] = rh * (2.0 / dt * up1[i] - up2[i] / eps) + sh[i] * (b1[i] - 2.0 / dt * w01[i]);
                g2[i] = rh * (2.0 / dt * up2[i] + up1[i] / eps) + sh[i] * (b2[i] - 2.0 / dt * w02[i]);
            }
            let (mut r1, mut r2) = k.spec2(&g1, &g2);
            for idx in 0..len {
                let v = nu * k.ksq(idx);
                r1[idx] += ua[idx] * v;
                r2[idx] += ub[idx] * v;
            }
            k.project(&mut r1, &mut r2);
            for idx in 1..len {
                let m = diag + nu * k.ksq(idx);
                r1[idx] /= m;
                r2[idx] /= m;
            }
            let (v1, v2) = (r1[0] / diag, r2[0] / diag);
            r1[0] = (v1 + v2 * a) / (1.0 + a * a);
            r2[0] = (v2 - v1 * a) / (1.0 + a * a);
            for idx in 0..len {
                ua[idx] -= r1[idx];
                ub[idx] -= r2[idx];
            }
            let upd = norm_sq(&r1) + norm_sq(&r2);
            let size = norm_sq(&ua) + norm_sq(&ub);
            if !upd.is_finite() {
                return Err(Error::NonFinite {
                    what: "midpoint velocity",
                    t,
                });
            }
            if converged(upd, size, tol) {
                break;
            }
            if iterations >= max_iter {
                return Err(Error::NoConvergence {
                    solver: "midpoint momentum solve",
                    iterations,
                    residual: (upd / size.max(f64::MIN_POSITIVE)).sqrt(),
                    t,
                });
            }
        }

        let (up1, up2) = k.phys2(&ua, &ub);
        let h = grid.h();
        let umax = (0..len)
            .map(|i| (up1[i] * up1[i] + up2[i] * up2[i]).sqrt())
            .fold(0.0, f64::max);
        let cfl = umax * dt / h;
        if cfl > 1.0 {
            return Err(Error::Cfl { t, cfl });
        }
        let (rmin, _) = min_max(&rho1_p);
        let floor = self.cfg.density_floor;
        if !(rmin >= floor * (1.0 - 1e-6)) {
            return Err(Error::DensityFloor {
                t: t + dt,
                min: rmin,
                floor,
            });
        }

        let coriolis: f64 = (0..len)
            .map(|i| sh[i] * sh[i] * ((-up2[i]) * up1[i] + up1[i] * up2[i]))
            .sum::<f64>()
            * grid.cell_area()
            * dt
            / eps;
        let dissipation = 2.0 * nu * dt * k.grad_sq(&ua, &ub);

        let ws1: Phys = (0..len).map(|i| 2.0 * sh[i] * up1[i] - w01[i]).collect();
        let ws2: Phys = (0..len).map(|i| 2.0 * sh[i] * up2[i] - w02[i]).collect();
        let sig1: Phys = rho1_p.iter().map(|r| r.sqrt()).collect();
        let h1: Phys = (0..len).map(|i| sig1[i] * ws1[i]).collect();
        let h2: Phys = (0..len).map(|i| sig1[i] * ws2[i]).collect();
        let (mut g1, mut g2) = k.spec2(&h1, &h2);
        k.project(&mut g1, &mut g2);

        let (lo1, hi1) = min_max(&rho1_p);
        let rc1 = 0.5 * (lo1 + hi1);
        let mut n1 = combine(&ua, &u0a, 2.0, -1.0);
        let mut n2 = combine(&ub, &u0b, 2.0, -1.0);
        let mut projection_iterations = 0;
        let (p1, p2) = loop {
            let (p1, p2) = k.phys2(&n1, &n2);
            let m1: Phys = (0..len).map(|i| rho1_p[i] * p1[i]).collect();
            let m2: Phys = (0..len).map(|i| rho1_p[i] * p2[i]).collect();
            let (mut s1, mut s2) = k.spec2(&m1, &m2);
            k.project(&mut s1, &mut s2);
            let mut upd = 0.0;
            for idx in 0..len {
                let d1 = (g1[idx] - s1[idx]) / rc1;
                let d2 = (g2[idx] - s2[idx]) / rc1;
                upd += d1.norm_sqr() + d2.norm_sqr();
                n1[idx] += d1;
                n2[idx] += d2;
            }
            let size = norm_sq(&n1) + norm_sq(&n2);
            if converged(upd, size, tol) {
                break k.phys2(&n1, &n2);
            }
            projection_iterations += 1;
            if projection_iterations >= max_iter {
                return Err(Error::NoConvergence {
                    solver: "weighted projection",
                    iterations: projection_iterations,
                    residual: (upd / size.max(f64::MIN_POSITIVE)).sqrt(),
                    t,
                });
            }
        };
        let wstar = grid_dot(&grid, &ws1, &ws1) + grid_dot(&grid, &ws2, &ws2);
        let kinetic: f64 = grid.cell_area()
            * (0..len)
                .map(|i| rho1_p[i] * (p1[i] * p1[i] + p2[i] * p2[i]))
                .sum::<f64>();

        let rho1 = k.scalar(rho1_s);
        if !rho1.is_finite() {
            return Err(Error::NonFinite { what: "density", t });
        }
        let u1 = k.vector(n1, n2);
        self.prev = Some((u0a, u0b));
        Ok((
            State {
                rho: rho1,
                u: u1,
                t: t + dt,
            },
            StepReport {
                dissipation,
                projection_loss: wstar - kinetic,
                coriolis_work: coriolis,
                iterations,
                projection_iterations,
            },
        ))
    }
}

/// ||sqrt(rho) u||^2 by grid quadrature.
pub fn kinetic_energy(rho: &crate::spectral::ScalarField, u: &VectorField) -> f64 {
    let r = rho.values();
    let (a, b) = (u.x1().values(), u.x2().values());
    rho.grid().cell_area()
        * (0..r.len())
            .map(|i| r[i] * (a[i] * a[i] + b[i] * b[i]))
            .sum::<f64>()
}
