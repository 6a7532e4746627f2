//! Runs the `sweep` command on a small ε list from a circle with the
//! asymmetric-well nonlinearity and prints the summary table.
//!
//! ```text
//! cargo run --release --example epsilon_sweep -- [out_dir]
//! ```

use std::io::Write;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "sharpcell-out/epsilon_sweep".into());
    std::fs::create_dir_all(&out)?;
    let config = format!("{out}/sweep.toml");
    let mut f = std::fs::File::create(&config)?;
    writeln!(f, "beta = 100.0\nnodes = 128\ndt = 5e-7\nt_end = 0.002\noutput_every = 100")?;
    writeln!(f, "[well]\nkind = \"asymmetric_polynomial\"\na = 150.0")?;
    drop(f);
    let code = sharpcell::cli::main_with_args([
        "sharpcell", "sweep", "--config", &config, "--curve", "circle:0.04", "--epsilons", "0.002,0.01",
        "--out", &out,
    ]);
    print!("{}", std::fs::read_to_string(format!("{out}/summary.csv"))?);
    std::process::exit(code);
}
