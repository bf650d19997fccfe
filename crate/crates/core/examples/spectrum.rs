//! Real eigenpairs of a symmetric tensor and their critical-point types.
//!
//! ```text
//! cargo run --example spectrum
//! ```

use tensor_modes::spectra::{find_eigenpairs, SolverConfig};
use tensor_modes::{HomogeneousPolynomial, Monomial};

fn main() -> tensor_modes::Result<()> {
    // (x^2 + y^2)^2 + x^2 y^2
    let p = HomogeneousPolynomial::from_terms(
        2,
        4,
        [
            (Monomial::new(vec![4, 0]), 1.0),
            (Monomial::new(vec![0, 4]), 1.0),
            (Monomial::new(vec![2, 2]), 3.0),
        ],
    )?;
    println!("P = {p}");
    println!(
        "symmetric tensor entry T[0,0,1,1] = {}",
        p.tensor_view().entry(&[0, 0, 1, 1])?
    );

    let report = find_eigenpairs(&p, &SolverConfig::default())?;
    println!(
        "{} real eigenpairs ({} eigenspaces, bound {})",
        report.real_count, report.eigenspace_count, report.bezout_bound
    );
    println!(
        "{:>10} {:>8} {:>10} {:>6}",
        "theta", "lambda", "kind", "index"
    );
    for e in &report.eigenpairs {
        println!(
            "{:>10.6} {:>8.4} {:>10} {:>6}",
            e.pair.angle(),
            e.pair.lambda,
            e.class.kind.to_string(),
            e.class.ph_index.map_or("?".into(), |k| k.to_string())
        );
    }
    println!("index sum {:?} (chi = {})", report.index_sum, report.chi);
    Ok(())
}
