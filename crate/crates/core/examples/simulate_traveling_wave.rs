//! Finds the asymmetric-well traveling wave, starts a simulation from it and
//! classifies the long-time regime.
//!
//! ```text
//! cargo run --release --example simulate_traveling_wave -- <epsilon> <t_end> [dt] [out_dir]
//! ```

use std::sync::Arc;

use sharpcell::simulator::{
    init_state, regime_metrics, classify_metrics, run, DirectorySink, MemorySink, SimConfig, Sink,
};
use sharpcell::travelwave::{find_traveling_waves, SearchConfig};
use sharpcell::{solve_standing_wave, PhiFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let arg = |i: usize, default: f64| -> Result<f64, std::num::ParseFloatError> {
        args.get(i).map_or(Ok(default), |s| s.parse())
    };
    let config = SimConfig {
        epsilon: arg(1, 0.01)?,
        t_end: arg(2, 0.05)?,
        dt: arg(3, 1e-7)?,
        output_every: 500,
        track_nodes: vec![0, 64, 128, 192],
        ..Default::default()
    };
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    let profile = config.standing_wave()?;
    // The wave is searched on a finer z-grid than the simulation uses.
    let fine = solve_standing_wave(&config.well, config.half_width, 2000)?;
    let phi = PhiFunction::bvp(Arc::new(fine), config.beta)?;
    let search = SearchConfig {
        v_range: (0.05, 3.0),
        lambda_range: (-0.5, 0.5),
        nv: 60,
        nl: 11,
        profile_nodes: config.nodes,
        ..Default::default()
    };
    let found = find_traveling_waves(&phi, &search)?;
    let wave = found
        .waves
        .iter()
        .min_by(|a, b| a.lambda.abs().total_cmp(&b.lambda.abs()))
        .ok_or("no traveling wave in the search box")?;
    let curve = wave.profile.curve.clone();
    println!(
        "wave V = {:.6} lambda = {:.6}, area {:.4e}, diameter {:.4e}",
        wave.v,
        wave.lambda,
        curve.shoelace_area(),
        curve.diameter()
    );
    let diameter = curve.diameter();
    let mut state = init_state(curve, &profile, &config, Some(wave.profile.velocity()))?;
    let mut memory = MemorySink::default();
    let mut sinks: Vec<&mut dyn Sink> = vec![&mut memory];
    let mut dir_sink;
    if let Some(dir) = args.get(4) {
        dir_sink = DirectorySink::new(std::path::Path::new(dir), &config.track_nodes)?;
        sinks.push(&mut dir_sink);
    }
    let start = std::time::Instant::now();
    let series = run(&mut state, &config, &profile, &mut sinks)?;
    println!("{} steps in {:.1?}", state.steps, start.elapsed());
    let m = regime_metrics(&series, diameter, &config.classify)?;
    println!("{m:?}");
    match classify_metrics(&m, &config.classify) {
        Ok(r) => println!("regime: {r}"),
        Err(e) => println!("regime: {e}"),
    }
    Ok(())
}
