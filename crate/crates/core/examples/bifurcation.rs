//! Mode count of x^4 + alpha y^4 + 2 beta x^2 y^2 as beta varies.
//!
//! ```text
//! cargo run --example bifurcation
//! ```

use tensor_modes::casestudy::bifurcation_scan;

fn main() -> tensor_modes::Result<()> {
    let alpha = 0.25;
    let scan = bifurcation_scan(alpha, -0.4, 1.5, 0.1)?;
    for row in &scan.rows {
        let angles: Vec<String> = row.angles.iter().map(|t| format!("{t:.3}")).collect();
        println!(
            "beta {:>5.2}: {} modes [{}]",
            row.beta,
            row.count,
            angles.join(", ")
        );
    }
    for t in &scan.transitions {
        println!(
            "count {} -> {} at beta = {:.9}",
            t.count_below, t.count_above, t.beta
        );
    }
    Ok(())
}
