//! Solves for the standing wave θ₀ of a double-well potential and prints c₀.
//!
//! ```text
//! cargo run --release --example standing_wave -- [well] [out.csv]
//! ```
//! `well` is `allen-cahn` (default), `asym150`, `asym:<a>` or `poly:c0,c1,...`.

use std::path::Path;

use sharpcell::{compute_c0, solve_standing_wave, PotentialWell};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let well: PotentialWell = args.get(1).map_or("allen-cahn", |s| s.as_str()).parse()?;
    let profile = solve_standing_wave(&well, 20.0, 2000)?;
    let c0 = compute_c0(&profile);
    println!("{}: c0 = {c0:.10}", well.label());
    if well == PotentialWell::AllenCahn {
        let err = profile
            .z()
            .iter()
            .zip(profile.theta())
            .map(|(z, t)| (t - 0.5 * (1.0 + (z / 8f64.sqrt()).tanh())).abs())
            .fold(0.0, f64::max);
        println!("max |θ₀ − closed form| = {err:.3e}, sqrt(2)/12 = {:.10}", 2f64.sqrt() / 12.0);
    }
    if let Some(out) = args.get(2) {
        profile.write_csv(Path::new(out))?;
        println!("wrote {out}");
    }
    Ok(())
}
