//! Eigenspace bound, parity and Poincaré–Hopf checks on random quartics,
//! and the admissible critical-point censuses on the 2-sphere.
//!
//! ```text
//! cargo run --example counting
//! ```

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tensor_modes::spectra::{bezout_bound, find_eigenpairs, table_compatibility, SolverConfig};
use tensor_modes::symtensor::random_polynomial;

fn main() -> tensor_modes::Result<()> {
    for (p, q) in [(3, 2), (3, 3), (2, 3)] {
        println!("N_R(p = {p}, q = {q}) = {}", bezout_bound(p, q)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [2, 3] {
        for _ in 0..3 {
            let p = random_polynomial(dim, 4, 1.0, &mut rng)?;
            let r = find_eigenpairs(&p, &SolverConfig::default())?;
            println!(
                "dim {dim}: {:>2} points, {:>2} eigenspaces (bound {}), parity {}, index sum {:?} vs chi {}",
                r.real_count,
                r.eigenspace_count,
                r.bezout_bound,
                r.parity.as_str(),
                r.index_sum,
                r.chi
            );
        }
    }

    println!("quartic censuses on S^2 (max, min, saddles by index -k):");
    type Census<'a> = (u32, u32, &'a [(u32, u32)]);
    let censuses: [Census; 5] = [
        (3, 3, &[(1, 4)]),
        (4, 4, &[(3, 2)]),
        (2, 2, &[(1, 1)]),
        (3, 2, &[(1, 3)]),
        (5, 5, &[(1, 8)]),
    ];
    for (max, min, s) in censuses {
        let saddles: BTreeMap<u32, u32> = s.iter().copied().collect();
        println!(
            "  ({max}, {min}, {saddles:?}) -> {}",
            if table_compatibility(max, min, &saddles, 3, 2) {
                "possible"
            } else {
                "impossible"
            }
        );
    }
    Ok(())
}
