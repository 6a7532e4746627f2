//! Tabulates Φ_β for a potential, reports its stability structure and writes
//! the table.
//!
//! ```text
//! cargo run --release --example phi_table -- [well] [beta] [out.csv]
//! ```

use std::path::Path;
use std::sync::Arc;

use sharpcell::simulator::stability_indicator;
use sharpcell::{solve_standing_wave, PhiFunction, PotentialWell};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let well: PotentialWell = args.get(1).map_or("asym150", |s| s.as_str()).parse()?;
    let beta: f64 = args.get(2).map_or(Ok(100.0), |s| s.parse())?;
    let profile = Arc::new(solve_standing_wave(&well, 20.0, 2000)?);
    let c0 = profile.c0();
    let phi = PhiFunction::bvp(profile, beta)?;
    println!("{} beta = {beta}: sup|Φ| = {:.6}, c0 = {c0:.6}", well.label(), phi.sup_norm());
    for v in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        println!(
            "V = {v:+.1}  Φ = {:+.6}  Φ′ = {:+.6}  stable: {}",
            phi.value(v)?,
            phi.derivative(v)?,
            stability_indicator(&phi, v, c0)?
        );
    }
    if let Some(out) = args.get(3) {
        phi.write_csv(Path::new(out))?;
        println!("wrote {out}");
    }
    Ok(())
}
