//! Scans the closure functional I₂ for the toy nonlinearity and prints the
//! refined traveling-wave roots.
//!
//! ```text
//! cargo run --release --example find_traveling_waves [-- <beta>]
//! ```

use sharpcell::travelwave::{find_traveling_waves, SearchConfig};
use sharpcell::PhiFunction;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let beta: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100.0);
    let phi = PhiFunction::toy(beta);
    let config = SearchConfig {
        v_range: (0.1, 4.0),
        lambda_range: (0.0, 20.0),
        nv: 40,
        nl: 41,
        ..Default::default()
    };
    let result = find_traveling_waves(&phi, &config)?;
    let missing = result.landscape.i2.iter().filter(|v| v.is_nan()).count();
    println!(
        "{} cells, {missing} without closure, {} roots, {} rejected brackets",
        result.landscape.i2.len(),
        result.waves.len(),
        result.rejected_brackets
    );
    for w in &result.waves {
        println!(
            "V = {:.6}  lambda = {:.6}  I2 = {:+.1e}  area = {:.4}  Q = {:.4}",
            w.v,
            w.lambda,
            w.i2,
            w.profile.curve.shoelace_area(),
            w.profile.curve.isoperimetric_quotient()
        );
    }
    Ok(())
}
