//! Estimates β_crit, the largest β with max |Φ_β′| < 1 on a velocity interval.
//!
//! ```text
//! cargo run --release --example beta_crit -- [v_max]
//! ```

use std::sync::Arc;

use sharpcell::{estimate_beta_crit, solve_standing_wave, PhiFamily, PotentialWell};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v_max: f64 = std::env::args().nth(1).map_or(Ok(5.0), |s| s.parse())?;
    let toy = estimate_beta_crit(&PhiFamily::Toy, v_max, 2000.0)?;
    println!("toy:        beta_crit = {:.6}  bracket {:?}", toy.beta_crit, toy.bracket);
    for well in [PotentialWell::AllenCahn, PotentialWell::asym150()] {
        let profile = Arc::new(solve_standing_wave(&well, 20.0, 2000)?);
        let est = estimate_beta_crit(&PhiFamily::Bvp(profile), v_max, 2000.0)?;
        println!("{:<11} beta_crit = {:.6}  bracket {:?}", format!("{}:", well.label()), est.beta_crit, est.bracket);
    }
    Ok(())
}
