//! The scalar equation g'' = alpha g^p along an eigenline: first integral,
//! periodicity, escape, and the Weierstrass form for p = 2.
//!
//! ```text
//! cargo run --release --example reduced_mode
//! ```

use tensor_modes::dynamics::{
    boundedness, find_period, integrate_mode, weierstrass_residual, ReducedMode, ESCAPE_THRESHOLD,
};

fn main() -> tensor_modes::Result<()> {
    for (alpha, p) in [(-4.0, 3), (-5.0, 3), (1.0, 3), (-1.0, 2)] {
        let mode = ReducedMode::new(alpha, p);
        let traj = integrate_mode(&mode, 1.0, 0.0, 1e-3, 20.0, Some(ESCAPE_THRESHOLD))?;
        let period = find_period(&mode, 1.0, 0.0, 1e-3, 20.0)?;
        println!(
            "alpha {alpha:>4}, p {p}: {:?}, psi drift {:.1e}, escape {:?}, period {:?}",
            boundedness(&mode),
            traj.psi_drift(&mode),
            traj.escape,
            period.map(|e| e.period)
        );
    }

    let mode = ReducedMode::new(1.0, 2);
    let traj = integrate_mode(&mode, 1.0, 0.0, 1e-3, 1.0, None)?;
    let (residual, c) = weierstrass_residual(&mode, &traj)?;
    println!("z'^2 = (2/3) z^3 + c with c = {c:.6}, residual {residual:.1e}");
    Ok(())
}
