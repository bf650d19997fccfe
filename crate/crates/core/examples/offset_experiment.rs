//! Release at rest next to each mode line and watch whether the motion stays
//! near the line, alongside the min/max type of the mode on the circle.
//!
//! ```text
//! cargo run --release --example offset_experiment
//! ```

use std::f64::consts::{FRAC_PI_4, PI};

use tensor_modes::casestudy::{critical_angles, offset_experiment, QuarticFamily};

fn main() -> tensor_modes::Result<()> {
    for beta in [1.0, -1.0] {
        let family = QuarticFamily::HigherSymmetry { beta };
        let modes = critical_angles(&family)?;
        for theta0 in [0.0, PI, FRAC_PI_4, -FRAC_PI_4] {
            let kind = modes
                .modes
                .iter()
                .find(|m| (m.theta - theta0).abs() < 1e-12)
                .map(|m| m.kind.as_str())
                .unwrap_or("?");
            let o = offset_experiment(&family, theta0, 1e-3, 100.0)?;
            println!(
                "beta {beta:>4}, theta0 {theta0:>7.4}: W-type {kind:<8} motion {:?} (max deviation {:.4})",
                o.verdict, o.max_deviation
            );
        }
    }
    Ok(())
}
