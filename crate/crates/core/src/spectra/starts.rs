//! Start points covering the unit sphere.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Deterministic low-discrepancy covering: an angle grid on the circle, a
/// Fibonacci lattice on the 2-sphere, normalized Halton points otherwise.
pub(crate) fn covering(dim: usize, count: usize) -> Vec<Vec<f64>> {
    match dim {
        2 => (0..count)
            .map(|k| {
                let theta = -PI + (k as f64 + 0.5) * 2.0 * PI / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect(),
        3 => fibonacci_sphere(count),
        _ => halton_sphere(dim, count),
    }
}

fn fibonacci_sphere(count: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * k as f64;
            vec![r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut k: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while k > 0 {
        out += (k % base as u64) as f64 * inv;
        k /= base as u64;
        inv /= b;
    }
    out
}

fn halton_sphere(dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    let mut k = 1u64;
    while out.len() < count {
        let x: Vec<f64> = (0..dim)
            .map(|i| {
                let base = PRIMES
                    .get(i)
                    .copied()
                    .unwrap_or(PRIMES[i % PRIMES.len()] + 2 * i as u32 + 1);
                2.0 * radical_inverse(k, base) - 1.0
            })
            .collect();
        k += 1;
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-3 {
            out.push(x.into_iter().map(|v| v / norm).collect());
        }
    }
    out
}

/// Seeded Gaussian starts (uniform directions after normalization).
pub(crate) fn random(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect::<Vec<f64>>()
        })
        .filter(|x| x.iter().any(|v| *v != 0.0))
        .collect()
}
