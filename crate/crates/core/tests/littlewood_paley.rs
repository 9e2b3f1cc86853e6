use std::f64::consts::PI;

use nsc_core::littlewood_paley::checks::gn_exponent;
use nsc_core::littlewood_paley::suite::{self, commutator_slope, corpus, run_suite};
use nsc_core::littlewood_paley::{
    bernstein_check, besov_norm, commutator_low_pass, gagliardo_nirenberg_check, paraproduct,
    remainder, sobolev_norm, Bony, BesovIndex, DyadicDecomposition,
};
use nsc_core::spectral::norms::{hs_norm, l2_norm, lp_norm};
use nsc_core::spectral::random::{random_scalar, RandomSpec};
use nsc_core::spectral::{Grid, ScalarField};
use nsc_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

// Independent evaluation of the cut-off profile for oracles.
fn chi_oracle(r: f64) -> f64 {
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let f = |t: f64| (-1.0 / t).exp();
    f(2.0 - r) / (f(2.0 - r) + f(r - 1.0))
}

fn phi_oracle(j: i32, r: f64, j_max: i32) -> f64 {
    match j {
        -1 => chi_oracle(r),
        j if j == j_max => 1.0 - chi_oracle(r / 2f64.powi(j)),
        j => chi_oracle(r / 2f64.powi(j + 1)) - chi_oracle(r / 2f64.powi(j)),
    }
}

fn setup(n: usize) -> (Grid, DyadicDecomposition) {
    let g = Grid::new(n).unwrap();
    let d = DyadicDecomposition::new(&g);
    (g, d)
}

#[test]
fn top_block_reaches_half_the_grid() {
    for n in [16usize, 64, 128, 512] {
        let (_, d) = setup(n);
        let j = d.j_max();
        assert!(2usize.pow((j + 1) as u32) >= n / 2);
        assert!(2usize.pow(j as u32) < n / 2);
    }
}

#[test]
fn low_mode_lives_in_the_bottom_block() {
    let (g, d) = setup(64);
    let u = ScalarField::from_fn(&g, |x, _| x.sin());
    let b = d.block(&u, -1).unwrap();
    assert!((&b - &u.scale(chi_oracle(1.0))).max_abs() < 1e-14);
    for j in 2..=d.j_max() {
        assert!(d.block(&u, j).unwrap().max_abs() < 1e-14);
    }
    assert!(matches!(d.block(&u, d.j_max() + 1), Err(Error::InvalidArgument(_))));
    assert!(d.block(&u, -2).is_err());
}

#[test]
fn single_mode_of_radius_eight() {
    let (g, d) = setup(64);
    let u = ScalarField::from_fn(&g, |x, _| (8.0 * x).cos());
    for j in d.indices() {
        let expected = phi_oracle(j, 8.0, d.j_max());
        let got = d.block(&u, j).unwrap();
        assert!((&got - &u.scale(expected)).max_abs() < 1e-13, "block {j}");
        if !(2..=4).contains(&j) {
            assert!(got.max_abs() < 1e-14, "block {j} should vanish");
        }
    }
}

#[test]
fn low_pass_examples() {
    let (g, d) = setup(64);
    let c = ScalarField::constant(&g, 3.0);
    for m in 0..=d.j_max() + 2 {
        assert!((&d.low_pass(&c, m) - &c).max_abs() < 1e-14);
    }
    let (g2, d2) = setup(128);
    for m in 0..=3 {
        let k = 2f64.powi(m + 2);
        let u = ScalarField::from_fn(&g2, |x, _| (k * x).sin());
        assert!(d2.low_pass(&u, m).max_abs() < 1e-14, "M = {m}");
    }
    // S_M equals the sum of the blocks below M
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = random_scalar(&g, &mut rng, &RandomSpec { kmax: 20.0, ..Default::default() });
    for m in 0..=d.j_max() + 1 {
        let sum = (-1..m).fold(ScalarField::zeros(&g), |acc, j| &acc + &d.block(&u, j).unwrap());
        assert!((&sum - &d.low_pass(&u, m)).max_abs() < 1e-13);
    }
    // the tail shrinks to zero
    let tails: Vec<f64> = (0..=d.j_max() + 1)
        .map(|m| hs_norm(&(&u - &d.low_pass(&u, m)), 1.0))
        .collect();
    assert!(tails.windows(2).all(|w| w[1] <= w[0]));
    assert!(*tails.last().unwrap() < 1e-12);
}

#[test]
fn sobolev_norm_examples() {
    let (g, d) = setup(64);
    let u = ScalarField::from_fn(&g, |x, _| (4.0 * x).sin());
    let norms = sobolev_norm(&d, &u, 1.0);
    let expected = 17f64.sqrt() * 2f64.sqrt() * PI;
    assert!((norms.direct - expected).abs() < 1e-11 * expected);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let v = random_scalar(&g, &mut rng, &RandomSpec::default());
    assert!((sobolev_norm(&d, &v, 0.0).direct - l2_norm(&v)).abs() < 1e-12 * l2_norm(&v));
    for s in [-1.0, 0.0, 1.0] {
        let r = sobolev_norm(&d, &v, s).ratio();
        assert!(r >= 0.25 && r <= 4.0, "s = {s}, ratio {r}");
    }
}

#[test]
fn besov_norm_examples() {
    let (g, d) = setup(64);
    let z = ScalarField::zeros(&g);
    assert_eq!(besov_norm(&d, &z, BesovIndex::new(1.0, 2.0, 2.0).unwrap()), 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v = random_scalar(&g, &mut rng, &RandomSpec::default());
    let b = besov_norm(&d, &v, BesovIndex::new(0.0, 2.0, 2.0).unwrap());
    let l2 = l2_norm(&v);
    assert!(b <= suite::LP_SOBOLEV_CONSTANT * l2 && l2 <= suite::LP_SOBOLEV_CONSTANT * b);

    // single mode |k| = 8: the sup over blocks of 2^{js} |phi_j(8)| ||u||_inf
    let u = ScalarField::from_fn(&g, |x, _| (8.0 * x).cos());
    let s = 0.5;
    let expected = d
        .indices()
        .map(|j| 2f64.powf(j as f64 * s) * phi_oracle(j, 8.0, d.j_max()).abs())
        .fold(0.0, f64::max);
    let got = besov_norm(&d, &u, BesovIndex::new(s, f64::INFINITY, f64::INFINITY).unwrap());
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");

    assert!(BesovIndex::new(0.0, 0.5, 1.0).is_err());
    assert!(BesovIndex::new(0.0, 2.0, f64::NAN).is_err());
}

#[test]
fn paraproduct_of_separated_frequencies() {
    let (g, d) = setup(128);
    let u = ScalarField::from_fn(&g, |x, _| x.cos());
    let v = ScalarField::from_fn(&g, |_, y| (32.0 * y).sin());
    let uv = u.pointwise_mul(&v);
    assert!((&paraproduct(&d, &u, &v) - &uv).max_abs() < 1e-13);
    assert!(paraproduct(&d, &v, &u).max_abs() < 1e-13);
    assert!(remainder(&d, &u, &v).max_abs() < 1e-13);

    let z = ScalarField::zeros(&g);
    let b = Bony::new(&d, &z, &z);
    assert_eq!(b.t_uv.max_abs() + b.t_vu.max_abs() + b.remainder.max_abs(), 0.0);
}

#[test]
fn commutator_examples() {
    let (g, d) = setup(64);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let f = random_scalar(&g, &mut rng, &RandomSpec::default());
    let a = ScalarField::constant(&g, 2.0);
    assert!(commutator_low_pass(&d, &a, &f, 3).max_abs() < 1e-13);

    let low = random_scalar(&g, &mut rng, &RandomSpec { kmax: 2.0, ..Default::default() });
    let a = ScalarField::from_fn(&g, |_, y| 2.0 + y.sin());
    assert!(commutator_low_pass(&d, &a, &low, d.j_max() + 1).max_abs() < 1e-12);
}

#[test]
fn commutator_decays_like_two_to_minus_m() {
    let g = Grid::new(512).unwrap();
    let slope = commutator_slope(&g, 0, &[2, 3, 4, 5, 6]);
    assert!((slope + 1.0).abs() <= 0.25, "slope {slope}");
}

#[test]
fn bernstein_examples() {
    let g = Grid::new(64).unwrap();
    for j in 1..4 {
        let k = 2f64.powi(j);
        let u = ScalarField::from_fn(&g, |x, _| (k * x).sin());
        let r = bernstein_check(&u, j).unwrap();
        assert!((r.ratio - 1.0).abs() < 1e-12 && r.holds);
        let u = ScalarField::from_fn(&g, |_, y| (2.0 * k * y).cos());
        let r = bernstein_check(&u, j).unwrap();
        assert!((r.ratio - 2.0).abs() < 1e-12 && r.holds);
    }
    for j in 1..4 {
        for seed in 0..4 {
            let u = suite::annulus_field(&g, seed, j);
            let r = bernstein_check(&u, j).unwrap().ratio;
            assert!((0.5..=2.0).contains(&r), "j = {j}: {r}");
        }
    }
    let wide = ScalarField::from_fn(&g, |x, _| x.sin() + (9.0 * x).sin());
    assert!(matches!(bernstein_check(&wide, 2), Err(Error::InvalidArgument(_))));
}

#[test]
fn gagliardo_nirenberg_examples() {
    let g = Grid::new(64).unwrap();
    let u = ScalarField::from_fn(&g, |x, _| x.sin());
    let r = gagliardo_nirenberg_check(&u, 4.0).unwrap();
    assert_eq!(gn_exponent(4.0), 0.5);
    // ||sin||_{L4}^4 = (3/8)(2 pi)^2, ||sin|| = ||cos|| = sqrt(2) pi
    let l4 = (0.375 * 4.0 * PI * PI).powf(0.25);
    assert!((r.lp - l4).abs() < 1e-12);
    let expected = l4 / (2f64.sqrt() * PI);
    assert!((r.constant - expected).abs() < 1e-12);
    assert!(r.constant <= suite::GAGLIARDO_NIRENBERG_CONSTANT);

    let scaled = gagliardo_nirenberg_check(&u.scale(7.5), 4.0).unwrap();
    assert!((scaled.constant - r.constant).abs() < 1e-12);
    assert!(gagliardo_nirenberg_check(&u, 2.0).is_err());
    assert!(gagliardo_nirenberg_check(&u.map(|v| v + 1.0), 4.0).is_err());
}

#[test]
fn gagliardo_nirenberg_constant_is_stable_under_refinement() {
    let worst = |n| {
        let g = Grid::new(n).unwrap();
        corpus(&g, 0, 12)
            .iter()
            .map(|u| gagliardo_nirenberg_check(u, 4.0).unwrap().constant)
            .fold(0.0, f64::max)
    };
    let (a, b) = (worst(64), worst(128));
    assert!(a.is_finite() && b.is_finite());
    assert!((a - b).abs() < 0.1 * a, "{a} vs {b}");
}

#[test]
fn suite_passes_on_small_grids() {
    let rows = run_suite(&[64, 128], 0, 12).unwrap();
    for r in &rows {
        assert!(r.pass, "{r:?}");
    }
    assert!(rows.iter().any(|r| r.property == "commutator_slope"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_reconstruction_is_exact(seed in any::<u64>(), n in prop::sample::select(vec![16usize, 64])) {
        let (g, d) = setup(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_scalar(&g, &mut rng, &RandomSpec { kmax: (n / 2) as f64, ..Default::default() });
        let sum = d.blocks(&u).iter().fold(ScalarField::zeros(&g).to_spectral(), |acc, b| &acc + b);
        let a = sum.coefficients();
        let b = u.coefficients();
        for (x, y) in a.iter().zip(b.iter()) {
            prop_assert!((x - y).norm() <= 1e-15 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn prop_bony_identity(seed in any::<u64>()) {
        let (g, d) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomSpec { kmax: 20.0, ..Default::default() };
        let u = random_scalar(&g, &mut rng, &spec);
        let v = random_scalar(&g, &mut rng, &spec);
        let uv = u.pointwise_mul(&v);
        let err = (&Bony::new(&d, &u, &v).sum() - &uv).max_abs();
        prop_assert!(err <= 1e-12 * uv.max_abs().max(1.0));
    }

    #[test]
    fn prop_distant_blocks_are_disjoint(seed in any::<u64>()) {
        let (g, d) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_scalar(&g, &mut rng, &RandomSpec { kmax: 30.0, decay: 0.0, rms: 1.0 });
        let blocks = d.blocks(&u);
        for a in 0..blocks.len() {
            for b in (a + 2)..blocks.len() {
                let ca = blocks[a].coefficients();
                let cb = blocks[b].coefficients();
                prop_assert!(ca.iter().zip(cb.iter()).all(|(x, y)| x.norm() == 0.0 || y.norm() == 0.0));
            }
        }
    }

    #[test]
    fn prop_paraproduct_operator_bound(seed in any::<u64>()) {
        let (g, d) = setup(64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spec = RandomSpec { kmax: 12.0, ..Default::default() };
        let u = random_scalar(&g, &mut rng, &spec);
        let v = random_scalar(&g, &mut rng, &spec);
        let t = paraproduct(&d, &u, &v);
        let ratio = hs_norm(&t, 1.0) / (lp_norm(&u, f64::INFINITY) * hs_norm(&v, 1.0));
        prop_assert!(ratio <= suite::PARAPRODUCT_CONSTANT, "ratio {}", ratio);
    }
}
