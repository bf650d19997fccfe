use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_modes::symtensor::random_polynomial;

fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0f64..2.0, dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn homogeneity(seed in any::<u64>(), dim in 2usize..4, degree in 2u32..6,
                   x in point(3), s in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(dim, degree, 2.0, &mut rng).unwrap();
        let x = &x[..dim];
        let sx: Vec<f64> = x.iter().map(|v| s * v).collect();
        let lhs = p.evaluate(&sx).unwrap();
        let rhs = s.powi(degree as i32) * p.evaluate(x).unwrap();
        let scale: f64 = p.terms().map(|(_, c)| c.abs()).sum::<f64>()
            * x.iter().map(|v| v.abs()).fold(0.0, f64::max).max(1e-3).powi(degree as i32)
            * s.abs().powi(degree as i32);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn euler_identity(seed in any::<u64>(), dim in 2usize..4, degree in 2u32..6, x in point(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(dim, degree, 2.0, &mut rng).unwrap();
        let x = &x[..dim];
        let g = p.gradient(x).unwrap();
        let lhs: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
        let rhs = degree as f64 * p.evaluate(x).unwrap();
        let scale: f64 = degree as f64 * p.terms().map(|(_, c)| c.abs()).sum::<f64>()
            * x.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(degree as i32);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn gradient_matches_central_differences(seed in any::<u64>(), dim in 2usize..4, x in point(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(dim, 4, 2.0, &mut rng).unwrap();
        let x = &x[..dim];
        let g = p.gradient(x).unwrap();
        let h = 1e-5;
        let gnorm = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for i in 0..dim {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            let fd = (p.evaluate(&xp).unwrap() - p.evaluate(&xm).unwrap()) / (2.0 * h);
            prop_assert!(rel_close(g[i], fd, 1e-6, gnorm.max(1.0)),
                "component {i}: analytic {} vs fd {fd}", g[i]);
        }
    }

    #[test]
    fn hessian_symmetric_and_matches_gradient_differences(seed in any::<u64>(), dim in 2usize..4,
                                                          x in point(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(dim, 4, 2.0, &mut rng).unwrap();
        let x = &x[..dim];
        let hess = p.hessian(x).unwrap();
        prop_assert_eq!(hess.clone(), hess.transpose());
        let scale = hess.amax().max(1.0);
        let h = 1e-5;
        for j in 0..dim {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[j] += h;
            xm[j] -= h;
            let gp = p.gradient(&xp).unwrap();
            let gm = p.gradient(&xm).unwrap();
            for i in 0..dim {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                prop_assert!((hess[(i, j)] - fd).abs() <= 1e-5 * scale);
            }
        }
    }

    #[test]
    fn contraction_reproduces_evaluation(seed in any::<u64>(), dim in 2usize..4, degree in 2u32..5,
                                         x in point(3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(dim, degree, 2.0, &mut rng).unwrap();
        let x = &x[..dim];
        let t = p.tensor_view();
        let direct = p.evaluate(x).unwrap();
        let contracted = t.contract(x).unwrap();
        let scale: f64 = p.terms().map(|(_, c)| c.abs()).sum::<f64>()
            * x.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(degree as i32);
        prop_assert!((direct - contracted).abs() <= 1e-12 * scale.max(1e-300));
    }

    #[test]
    fn tensor_entries_permutation_invariant(seed in any::<u64>(), idx in prop::collection::vec(0usize..3, 4),
                                            rot in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_polynomial(3, 4, 2.0, &mut rng).unwrap();
        let t = p.tensor_view();
        let mut permuted = idx.clone();
        permuted.rotate_left(rot);
        permuted.swap(0, 3);
        prop_assert_eq!(t.entry(&idx).unwrap(), t.entry(&permuted).unwrap());
    }
}
