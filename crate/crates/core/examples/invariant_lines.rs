//! Eigenvectors span invariant lines of x'' = -grad V(x); a combination of
//! two modes is not the sum of the mode motions.
//!
//! ```text
//! cargo run --release --example invariant_lines
//! ```

use std::f64::consts::FRAC_1_SQRT_2;

use tensor_modes::casestudy::{potential_of, QuarticFamily};
use tensor_modes::dynamics::{line_deviation, SecondOrderSystem, State};
use tensor_modes::spectra::{find_eigenpairs, SolverConfig};

fn main() -> tensor_modes::Result<()> {
    let v = potential_of(&QuarticFamily::HigherSymmetry { beta: 1.0 })?;
    let sys = SecondOrderSystem::unit_mass(v);
    let report = find_eigenpairs(sys.potential(), &SolverConfig::default())?;
    for e in &report.eigenpairs {
        let traj = sys.integrate(&State::at_rest(e.pair.v.clone()), 1e-3, 10.0)?;
        println!(
            "line at theta = {:>8.5}: deviation {:.1e}, energy drift {:.1e}, q(10) = {:?}",
            e.pair.angle(),
            line_deviation(&traj, &e.pair.v),
            traj.energy_drift,
            traj.last().q
        );
    }

    let a = FRAC_1_SQRT_2;
    let run = |q: Vec<f64>| sys.integrate(&State::at_rest(q), 1e-3, 10.0);
    let (x, y, both) = (run(vec![a, 0.0])?, run(vec![0.0, a])?, run(vec![a, a])?);
    let gap = both
        .samples
        .iter()
        .zip(x.samples.iter().zip(&y.samples))
        .flat_map(|(b, (sx, sy))| (0..2).map(move |i| (b.q[i] - sx.q[i] - sy.q[i]).abs()))
        .fold(0.0, f64::max);
    println!("superposition gap over t in [0, 10]: {gap:.4}");
    Ok(())
}
