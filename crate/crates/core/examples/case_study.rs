//! Closed-form mode structure of the two planar quartic families, checked
//! against the generic eigenpair solver.
//!
//! ```text
//! cargo run --example case_study
//! ```

use tensor_modes::casestudy::{critical_angles, cross_validate, restrict, QuarticFamily};
use tensor_modes::spectra::SolverConfig;

fn main() -> tensor_modes::Result<()> {
    let families = [
        QuarticFamily::HigherSymmetry { beta: 1.0 },
        QuarticFamily::HigherSymmetry { beta: -1.0 },
        QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.0,
        },
        QuarticFamily::LowerSymmetry {
            alpha: 0.25,
            beta: 0.75,
        },
    ];
    for family in families {
        let profile = restrict(&family, 360)?;
        let min = profile.values.iter().copied().fold(f64::INFINITY, f64::min);
        println!("{family}: min W = {min:.4}");
        for m in critical_angles(&family)?.modes {
            println!(
                "  theta {:>9.6}  d2W {:>8.4}  {:<10} c = {:.4}",
                m.theta,
                m.d2w,
                m.kind.as_str(),
                m.c_theta
            );
        }
        let cv = cross_validate(&family, &SolverConfig::default())?;
        println!(
            "  solver agrees: {} points, angle error {:.1e}, lambda error {:.1e}",
            cv.points, cv.max_angle_error, cv.max_lambda_error
        );
    }
    Ok(())
}
