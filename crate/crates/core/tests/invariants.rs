use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use kp2_core::estimates::exponents::{
    admissibility_report, regularity_threshold, select_exponents,
};
use kp2_core::estimates::regions::{classify_region, RegionTag};
use kp2_core::grid::{apply_multiplier, forward_transform, inverse_transform, project_zero_x_mean};
use kp2_core::norms::{
    bourgain_norm, homogeneous_norm, sobolev_norm, BourgainWeights, SpaceTimeField,
};
use kp2_core::propagator::{apply_linear, dispersion_symbol};
use kp2_core::resonance::{
    identity_terms, r_alpha, resonance_bounds_check, same_sign_and_lambda_max_check, Mu, REL_TOL,
};
use kp2_core::sampling::{shard_rng, signed_log_uniform};
use kp2_core::{Grid2D, PhysicalField, SpectralField};

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

fn grid_for(n: usize, m: usize) -> Grid2D {
    Grid2D::new(n, m, 10.0 + n as f64, 7.0 + m as f64).unwrap()
}

fn random_real(g: Grid2D, seed: u64) -> SpectralField {
    let mut rng = shard_rng(seed, 0);
    let values: Vec<f64> = (0..g.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
    project_zero_x_mean(&forward_transform(
        &PhysicalField::from_real(g, &values).unwrap(),
    ))
}

fn random_complex(g: Grid2D, seed: u64) -> SpectralField {
    let mut rng = shard_rng(seed, 1);
    let c = (0..g.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    SpectralField::new(g, c).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn sizes() -> impl Strategy<Value = (usize, usize)> {
    (
        prop::sample::select(vec![16usize, 32, 64]),
        prop::sample::select(vec![16usize, 32, 64]),
    )
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn transform_round_trip_and_parseval((n, m) in sizes(), seed in any::<u64>()) {
        let g = grid_for(n, m);
        let mut rng = shard_rng(seed, 2);
        let v: Vec<Complex64> = (0..g.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let f = PhysicalField::new(g, v).unwrap();
        let spec = forward_transform(&f);
        let back = inverse_transform(&spec);
        let err = f.values().iter().zip(back.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * f.max_abs());
        prop_assert!(rel(f.l2_norm(), spec.l2_norm()) <= 1e-12);
    }

    #[test]
    fn projection_is_orthogonal((n, m) in sizes(), seed in any::<u64>()) {
        let f = random_complex(grid_for(n, m), seed);
        let p = project_zero_x_mean(&f);
        let pp = project_zero_x_mean(&p);
        prop_assert_eq!(pp.coeffs(), p.coeffs());
        prop_assert!(p.l2_norm() <= f.l2_norm());
        let residual = f.sub(&p).unwrap();
        let inner: Complex64 = residual.coeffs().iter().zip(p.coeffs()).map(|(a, b)| a * b.conj()).sum();
        prop_assert!(inner.norm() <= 1e-12 * f.l2_norm().powi(2));
    }

    #[test]
    fn unimodular_multiplier_is_isometry((n, m) in sizes(), seed in any::<u64>(), a in -5.0..5.0f64, c in -5.0..5.0f64) {
        let f = project_zero_x_mean(&random_complex(grid_for(n, m), seed));
        let g = apply_multiplier(&f, |xi, eta| Complex64::from_polar(1.0, a * xi * xi + c * eta / xi)).unwrap();
        prop_assert!(rel(f.l2_norm(), g.l2_norm()) <= 1e-12);
    }

    #[test]
    fn linear_group_unitary_with_group_law(seed in any::<u64>(), alpha in 1.34..6.0f64, s in -4.0..4.0f64, t in -4.0..4.0f64) {
        let f = random_real(grid_for(32, 16), seed);
        let us = apply_linear(&f, s, alpha);
        prop_assert!(rel(us.l2_norm(), f.l2_norm()) <= 1e-12);
        let composed = apply_linear(&apply_linear(&f, t, alpha), s, alpha);
        let direct = apply_linear(&f, s + t, alpha);
        prop_assert!(composed.sub(&direct).unwrap().l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn norms_homogeneous_and_subadditive(seed in any::<u64>(), c in -10.0..10.0f64, s1 in -1.0..2.0f64, s2 in -1.0..2.0f64) {
        let g = grid_for(32, 32);
        let f = random_real(g, seed);
        let h = random_real(g, seed ^ 0x9E37);
        let cf = f.scale(Complex64::new(c, 0.0));
        let sum = f.add_scaled(&h, Complex64::new(1.0, 0.0)).unwrap();
        prop_assert!((sobolev_norm(&cf, s1, s2) - c.abs() * sobolev_norm(&f, s1, s2)).abs() <= 1e-10 * (1.0 + sobolev_norm(&cf, s1, s2)));
        prop_assert!(sobolev_norm(&sum, s1, s2) <= (sobolev_norm(&f, s1, s2) + sobolev_norm(&h, s1, s2)) * (1.0 + 1e-10));
        let hn = |x: &SpectralField| homogeneous_norm(x, s1.min(0.5), s2.abs()).unwrap();
        prop_assert!((hn(&cf) - c.abs() * hn(&f)).abs() <= 1e-10 * (1.0 + hn(&cf)));
        prop_assert!(hn(&sum) <= (hn(&f) + hn(&h)) * (1.0 + 1e-10));
    }

    #[test]
    fn bourgain_norm_homogeneous_and_subadditive(seed in any::<u64>(), c in -10.0..10.0f64, b in -1.0..1.0f64, sigma in 0.0..1.0f64) {
        let g = grid_for(16, 16);
        let u = SpaceTimeField::free_evolution(&random_real(g, seed), 2.0, 4.0, 32).unwrap();
        let v = SpaceTimeField::free_evolution(&random_real(g, seed ^ 7), 3.0, 4.0, 32).unwrap();
        let w = BourgainWeights { s1: 0.3, s2: -0.2, b, sigma };
        let n = |x: &SpaceTimeField| bourgain_norm(x, 2.0, w);
        let cu = u.scale(Complex64::new(c, 0.0));
        prop_assert!((n(&cu) - c.abs() * n(&u)).abs() <= 1e-10 * (1.0 + n(&cu)));
        prop_assert!(n(&u.add(&v).unwrap()) <= (n(&u) + n(&v)) * (1.0 + 1e-10));
    }

    #[test]
    fn resonance_symmetries(xi in -1e3..1e3f64, xi1 in -1e3..1e3f64, alpha in 1.34..6.0f64) {
        let r = r_alpha(xi, xi1, alpha);
        let scale = 1.0 + xi.abs().max(xi1.abs()).max((xi - xi1).abs()).powf(alpha + 1.0);
        prop_assert!((r - r_alpha(xi, xi - xi1, alpha)).abs() <= 1e-12 * scale);
        prop_assert!((r + r_alpha(-xi, -xi1, alpha)).abs() <= 1e-12 * scale);
        prop_assert!((r + r_alpha(xi1, xi, alpha)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn resonance_bounds_and_identity(seed in any::<u64>(), alpha in 1.34..6.0f64) {
        let mut rng = shard_rng(seed, 3);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| signed_log_uniform(rng, 1e-3, 1e3);
        let (xi, xi1) = (draw(&mut rng), draw(&mut rng));
        prop_assume!(xi != xi1);
        prop_assert!(resonance_bounds_check(xi, xi1, alpha).unwrap().holds());
        let mu = Mu::new(draw(&mut rng) + dispersion_symbol(xi, 0.0, alpha).unwrap(), xi, draw(&mut rng));
        let mu1 = Mu::new(draw(&mut rng), xi1, draw(&mut rng));
        prop_assert!(identity_terms(&mu, &mu1, alpha).unwrap().relative_residual() <= REL_TOL);
        prop_assert!(same_sign_and_lambda_max_check(&mu, &mu1, alpha).unwrap().holds());
    }

    #[test]
    fn regions_partition(seed in any::<u64>(), alpha in 1.34..6.0f64) {
        let mut rng = shard_rng(seed, 4);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| signed_log_uniform(rng, 1e-3, 1e2);
        let mu = Mu::new(draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let mu1 = Mu::new(draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let mu2 = mu.minus(&mu1);
        prop_assume!(mu2.xi != 0.0);
        let tag = classify_region(&mu1, &mu, alpha).unwrap();
        prop_assert_eq!(tag, classify_region(&mu1, &mu, alpha).unwrap());
        let (a1, a2) = (mu1.xi.abs(), mu2.xi.abs());
        let l = [mu.lambda(alpha).abs(), mu1.lambda(alpha).abs(), mu2.lambda(alpha).abs()];
        let members: Vec<RegionTag> = RegionTag::ALL
            .into_iter()
            .filter(|&t| match t {
                RegionTag::Outside => a1 > a2,
                RegionTag::A00 => a1 <= a2 && a2 <= 1.0,
                _ => {
                    let band = if t.xi_region() == Some(1) { a1 <= a2 / 3.0 } else { a2 / 3.0 < a1 };
                    let j = t.lambda_index().unwrap() as usize;
                    let dominant = (0..3).all(|i| if i < j { l[i] < l[j] } else { l[i] <= l[j] });
                    a1 <= a2 && a2 > 1.0 && band && dominant
                }
            })
            .collect();
        prop_assert_eq!(members, vec![tag]);
    }

    #[test]
    fn selected_exponents_are_admissible(alpha in 1.4..=6.0f64, ds in 0.01..2.0f64) {
        let e = select_exponents(alpha, regularity_threshold(alpha) + ds).unwrap();
        for c in admissibility_report(&e) {
            prop_assert!(c.satisfied, "{:?} slack {}", c.id, c.slack);
        }
        prop_assert!(e.b > 0.5 && e.b_prime > -0.5 && e.delta > 0.0);
    }
}
