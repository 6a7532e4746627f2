//! Command-line front end: `phi`, `tw`, `simulate` and `sweep`.
//!
//! Every command writes its outputs plus a `manifest.json` into one directory,
//! chosen by `--out`, else `$SHARPCELL_OUT/<command>`, else `sharpcell-out/<command>`.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Vec2};
use crate::io::create_file;
use crate::manifest::RunManifest;
use crate::nonlinearity::{estimate_beta_crit, PhiFamily, PhiFunction, PhiKind, TableRange};
use crate::potential::{solve_standing_wave, PotentialWell};
use crate::simulator::{
    classify_metrics, init_state, regime_metrics, run, DiagnosticsRecord, DirectorySink,
    MemorySink, RegimeMetrics, SimConfig, SimulationState, Sink,
};
use crate::travelwave::{find_traveling_waves, SearchConfig, TravelingWaveProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable naming the output root.
pub const OUT_ENV: &str = "SHARPCELL_OUT";

#[derive(Debug, Parser)]
#[command(name = "sharpcell", version, about = "Sharp-interface cell motility: Φ tables, traveling waves, curve dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate Φ_β(V) and optionally estimate the critical β.
    Phi(PhiArgs),
    /// Scan I₂(V, λ) for traveling waves and write their profiles.
    Tw(TwArgs),
    /// Evolve one curve and classify its long-time regime.
    Simulate(SimulateArgs),
    /// Run one simulation per ε and summarize the regimes.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhiSource {
    /// Use the analytic toy Φ̃ = −β(1 − tanh V)e^{−V²}.
    #[arg(long, conflicts_with_all = ["well", "phi_csv"])]
    pub toy: bool,
    /// Potential: allen-cahn, asym150, asym:<a> or poly:c0,c1,...
    #[arg(long)]
    pub well: Option<String>,
    /// Read a tabulated Φ (columns V, phi).
    #[arg(long)]
    pub phi_csv: Option<PathBuf>,
    #[arg(long, default_value_t = 100.0)]
    pub beta: f64,
    /// z-grid intervals M of the standing wave.
    #[arg(long, default_value_t = 2000)]
    pub intervals: usize,
    /// Half-width L of the z-grid.
    #[arg(long, default_value_t = 20.0)]
    pub half_width: f64,
}

impl PhiSource {
    fn well(&self) -> Result<PotentialWell> {
        self.well.as_deref().unwrap_or("asym150").parse()
    }

    fn build(&self, range: TableRange) -> Result<PhiFunction> {
        if self.toy {
            if !(self.beta >= 0.0) {
                return Err(Error::InvalidInput(format!("beta must be >= 0, got {}", self.beta)));
            }
            return Ok(PhiFunction::toy(self.beta));
        }
        if let Some(path) = &self.phi_csv {
            return PhiFunction::from_csv(path);
        }
        let profile = solve_standing_wave(&self.well()?, self.half_width, self.intervals)?;
        PhiFunction::bvp_with_range(Arc::new(profile), self.beta, range)
    }
}

#[derive(Debug, Args, Serialize)]
pub struct PhiArgs {
    #[command(flatten)]
    pub source: PhiSource,
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"], default_values_t = [-10.0, 10.0])]
    pub v_range: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub dv: f64,
    /// Also estimate β_crit (largest β with Φ′ < 1 on [−V, V]).
    #[arg(long)]
    pub beta_crit: bool,
    #[arg(long, default_value_t = 5.0)]
    pub beta_crit_vmax: f64,
    #[arg(long, default_value_t = 2000.0)]
    pub beta_hi: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TwArgs {
    #[command(flatten)]
    pub source: PhiSource,
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"], default_values_t = [0.1, 3.0])]
    pub v_range: Vec<f64>,
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["MIN", "MAX"], default_values_t = [0.0, 20.0])]
    pub lambda_range: Vec<f64>,
    #[arg(long, default_value_t = 30)]
    pub nv: usize,
    #[arg(long, default_value_t = 41)]
    pub nl: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Nodes of each written profile.
    #[arg(long, default_value_t = 256)]
    pub nodes: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    /// TOML file mirroring the simulation config; defaults apply to missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// circle:R, ellipse:A:B, file:PATH (x,y CSV) or tw:PROFILE.json
    #[arg(long)]
    pub curve: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub curve: String,
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub epsilons: Vec<f64>,
    /// Concurrent runs (default: available cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn out_dir(explicit: &Option<PathBuf>, command: &str) -> PathBuf {
    if let Some(dir) = explicit {
        return dir.clone();
    }
    match std::env::var_os(OUT_ENV) {
        Some(root) if !root.is_empty() => PathBuf::from(root).join(command),
        _ => PathBuf::from("sharpcell-out").join(command),
    }
}

fn range_pair(v: &[f64], name: &str) -> Result<(f64, f64)> {
    match v {
        [a, b] if a.is_finite() && b.is_finite() && b > a => Ok((*a, *b)),
        _ => Err(Error::InvalidInput(format!("{name} must be two finite values MIN < MAX, got {v:?}"))),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).unwrap_or(serde_json::Value::Null)
}

/// Writes a CSV whose cells are already formatted.
fn write_text_csv(path: &Path, headers: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create_file(path)?);
    w.write_record(headers).map_err(|e| Error::parse(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| Error::parse(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Runs a command body, then writes the manifest with timing and exit status.
fn with_manifest(
    command: &str,
    config: serde_json::Value,
    dir: &Path,
    body: impl FnOnce(&mut RunManifest) -> Result<i32>,
) -> i32 {
    let start = Instant::now();
    let mut manifest = RunManifest::new(command, config);
    let status = match std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e)) {
        Ok(()) => match body(&mut manifest) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e}");
                manifest.summary["error"] = serde_json::Value::String(e.to_string());
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    if manifest.summary.is_null() {
        manifest.summary = serde_json::json!({});
    }
    manifest.exit_status = status;
    manifest.duration_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = manifest.write(dir) {
        eprintln!("error: {e}");
        return EXIT_USAGE.max(status);
    }
    status
}

pub fn cmd_phi(args: &PhiArgs) -> i32 {
    let dir = out_dir(&args.out, "phi");
    with_manifest("phi", to_json(args), &dir, |m| {
        let (v_min, v_max) = range_pair(&args.v_range, "--v-range")?;
        let range = TableRange { v_min, v_max, dv: args.dv };
        range.nodes()?;
        let phi = args.source.build(range)?;
        if let Some(p) = &args.source.phi_csv {
            m.inputs.push(p.display().to_string());
        }
        let path = dir.join("phi.csv");
        if matches!(phi.kind(), PhiKind::BvpBacked { .. }) {
            phi.write_csv(&path)?;
        } else {
            let n = range.nodes()?;
            let rows = (0..n)
                .map(|k| {
                    let v = v_min + args.dv * k as f64;
                    Ok(vec![v, phi.value(v)?, phi.derivative(v)?])
                })
                .collect::<Result<Vec<_>>>()?;
            crate::io::write_csv(&path, &["V", "phi", "phi_prime"], rows)?;
        }
        m.outputs.push("phi.csv".into());
        m.summary = serde_json::json!({ "sup_norm": phi.sup_norm(), "phi_at_zero": phi.value(0.0)? });
        if args.beta_crit {
            let family = if args.source.toy {
                PhiFamily::Toy
            } else {
                let p = solve_standing_wave(&args.source.well()?, args.source.half_width, args.source.intervals)?;
                PhiFamily::Bvp(Arc::new(p))
            };
            let est = estimate_beta_crit(&family, args.beta_crit_vmax, args.beta_hi)?;
            println!(
                "beta_crit = {:.6} (bracket [{:.6}, {:.6}], V in [-{}, {}])",
                est.beta_crit, est.bracket.0, est.bracket.1, est.v_max, est.v_max
            );
            m.summary["beta_crit"] = to_json(&est.beta_crit);
            m.summary["beta_crit_bracket"] = to_json(&est.bracket);
            m.summary["beta_crit_vmax"] = to_json(&est.v_max);
        }
        println!("wrote {}", path.display());
        Ok(EXIT_OK)
    })
}

pub fn cmd_tw(args: &TwArgs) -> i32 {
    let dir = out_dir(&args.out, "tw");
    with_manifest("tw", to_json(args), &dir, |m| {
        let config = SearchConfig {
            v_range: range_pair(&args.v_range, "--v-range")?,
            lambda_range: range_pair(&args.lambda_range, "--lambda-range")?,
            nv: args.nv,
            nl: args.nl,
            tol: args.tol,
            profile_nodes: args.nodes,
            ..Default::default()
        };
        config.validate()?;
        let phi = args.source.build(TableRange::default())?;
        let result = find_traveling_waves(&phi, &config)?;
        result.landscape.write_csv(&dir.join("landscape.csv"))?;
        m.outputs.push("landscape.csv".into());
        let mut rows = Vec::new();
        let mut roots = Vec::new();
        for (k, w) in result.waves.iter().enumerate() {
            let stem = format!("profile_{k}");
            w.profile.write(&dir, &stem)?;
            m.outputs.push(format!("{stem}.csv"));
            m.outputs.push(format!("{stem}.json"));
            rows.push(vec![
                w.v.to_string(),
                w.lambda.to_string(),
                w.i2.to_string(),
                w.profile.closure_residual.to_string(),
                w.profile.closure_gap.to_string(),
                format!("{stem}.json"),
            ]);
            roots.push(serde_json::json!({
                "V": w.v, "lambda": w.lambda, "I2": w.i2, "axis": w.axis, "profile": format!("{stem}.json"),
            }));
            println!("root V = {:.6} lambda = {:.6} -> {stem}.json", w.v, w.lambda);
        }
        write_text_csv(
            &dir.join("roots.csv"),
            &["V", "lambda", "I2", "closure_residual", "closure_gap", "profile"],
            &rows,
        )?;
        m.outputs.push("roots.csv".into());
        m.summary = serde_json::json!({
            "roots": roots,
            "rejected_brackets": result.rejected_brackets,
            "tolerances": { "tol": config.tol, "min_speed": config.min_speed },
        });
        println!("{} nontrivial roots", result.waves.len());
        Ok(EXIT_OK)
    })
}

/// Initial curve of a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSource {
    Circle(f64),
    Ellipse(f64, f64),
    File(PathBuf),
    TravelingWave(PathBuf),
}

impl std::str::FromStr for CurveSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad curve source '{s}'"));
        let num = |t: &str| t.parse::<f64>().ok().filter(|x| *x > 0.0 && x.is_finite()).ok_or_else(bad);
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "circle" => Ok(CurveSource::Circle(num(rest)?)),
            "ellipse" => {
                let (a, b) = rest.split_once(':').ok_or_else(bad)?;
                Ok(CurveSource::Ellipse(num(a)?, num(b)?))
            }
            "file" if !rest.is_empty() => Ok(CurveSource::File(rest.into())),
            "tw" if !rest.is_empty() => Ok(CurveSource::TravelingWave(rest.into())),
            _ => Err(bad()),
        }
    }
}

impl CurveSource {
    /// The curve with `nodes` points and, for a traveling wave, its velocity.
    pub fn load(&self, nodes: usize) -> Result<(DiscreteCurve, Option<Vec2>)> {
        let fit = |c: DiscreteCurve| {
            if c.len() == nodes {
                Ok(c)
            } else {
                c.resample_equal_arclength(nodes)
            }
        };
        match self {
            CurveSource::Circle(r) => Ok((DiscreteCurve::circle(*r, nodes, Vec2::ZERO)?, None)),
            CurveSource::Ellipse(a, b) => Ok((DiscreteCurve::ellipse(*a, *b, nodes, Vec2::ZERO)?, None)),
            CurveSource::File(p) => Ok((fit(DiscreteCurve::read_csv(p)?)?, None)),
            CurveSource::TravelingWave(p) => {
                let tw = TravelingWaveProfile::load(p)?;
                let v = tw.velocity();
                Ok((fit(tw.curve)?, Some(v)))
            }
        }
    }

    fn input(&self) -> Option<String> {
        match self {
            CurveSource::File(p) | CurveSource::TravelingWave(p) => Some(p.display().to_string()),
            _ => None,
        }
    }
}

/// Result of one simulation written to a directory.
#[derive(Debug, Clone)]
pub struct SimulationReport {
    pub series: Vec<DiagnosticsRecord>,
    pub diameter: f64,
    pub metrics: Option<RegimeMetrics>,
    /// Regime name, `inconclusive` or `failed`.
    pub regime: String,
    pub error: Option<String>,
    pub outputs: Vec<String>,
    pub state: SimulationState,
}

fn load_config(path: &Option<PathBuf>) -> Result<SimConfig> {
    match path {
        Some(p) => SimConfig::load(p),
        None => Ok(SimConfig::default()),
    }
}

/// Runs one simulation into `dir`: diagnostics, traces, snapshots and a
/// centroid trajectory. On a step failure the last accepted curve is written
/// to `curve_last.csv` and the report carries the error.
pub fn simulate_to_dir(
    config: &SimConfig,
    curve: DiscreteCurve,
    tw_velocity: Option<Vec2>,
    dir: &Path,
) -> Result<SimulationReport> {
    config.validate()?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let profile = config.standing_wave()?;
    let diameter = curve.diameter();
    let mut state = init_state(curve, &profile, config, tw_velocity)?;
    let mut memory = MemorySink::default();
    let mut files = DirectorySink::new(dir, &config.track_nodes)?;
    let outcome = {
        let mut sinks: [&mut dyn Sink; 2] = [&mut memory, &mut files];
        run(&mut state, config, &profile, &mut sinks)
    };
    let series = memory.records;
    let mut outputs = vec!["diag.csv".to_string(), "trajectory.csv".to_string()];
    outputs.extend(config.track_nodes.iter().map(|i| format!("trace_{i}.csv")));
    crate::io::write_csv(
        &dir.join("trajectory.csv"),
        &["t", "cx", "cy"],
        series.iter().map(|r| vec![r.t, r.centroid.x, r.centroid.y]),
    )?;
    let (regime, metrics, error) = match outcome {
        Ok(_) => {
            let metrics = regime_metrics(&series, diameter, &config.classify).ok();
            let regime = match metrics.as_ref().map(|m| classify_metrics(m, &config.classify)) {
                Some(Ok(r)) => r.to_string(),
                _ => "inconclusive".to_string(),
            };
            (regime, metrics, None)
        }
        Err(e) if e.is_numerical() => {
            state.curve.write_csv(&dir.join("curve_last.csv"))?;
            outputs.push("curve_last.csv".into());
            ("failed".to_string(), None, Some(e))
        }
        Err(e) => return Err(e),
    };
    Ok(SimulationReport {
        series,
        diameter,
        metrics,
        regime,
        error: error.map(|e| e.to_string()),
        outputs,
        state,
    })
}

fn report_summary(config: &SimConfig, r: &SimulationReport) -> serde_json::Value {
    serde_json::json!({
        "regime": r.regime,
        "metrics": r.metrics,
        "diameter": r.diameter,
        "steps": r.state.steps,
        "t": r.state.t,
        "records": r.series.len(),
        "self_intersecting": r.series.iter().any(|s| s.self_intersecting),
        "error": r.error,
        "dt_over_h2": config.dt_over_h2(),
        "resampling": format!(
            "equal-chord resampling every {} steps; actin columns carried by 4-point interpolation",
            config.resample_every
        ),
    })
}

pub fn cmd_simulate(args: &SimulateArgs) -> i32 {
    let dir = out_dir(&args.out, "simulate");
    let config = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let echo = serde_json::json!({ "simulation": config, "curve": args.curve });
    with_manifest("simulate", echo, &dir, |m| {
        let source: CurveSource = args.curve.parse()?;
        m.inputs.extend(args.config.iter().map(|p| p.display().to_string()));
        m.inputs.extend(source.input());
        m.warnings = config.warnings();
        for w in &m.warnings {
            eprintln!("warning: {w}");
        }
        let (curve, velocity) = source.load(config.nodes)?;
        let report = simulate_to_dir(&config, curve, velocity, &dir)?;
        m.outputs = report.outputs.clone();
        if config.snapshot_every > 0 {
            m.outputs.push("curve_<step>.csv".into());
        }
        m.summary = report_summary(&config, &report);
        println!("regime: {}", report.regime);
        match &report.error {
            Some(e) => {
                eprintln!("error: {e}");
                Ok(EXIT_NUMERICAL)
            }
            None => Ok(EXIT_OK),
        }
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> i32 {
    let dir = out_dir(&args.out, "sweep");
    let template = match load_config(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let echo = serde_json::json!({
        "template": template, "curve": args.curve, "epsilons": args.epsilons, "jobs": args.jobs,
    });
    with_manifest("sweep", echo, &dir, |m| {
        if args.epsilons.is_empty() || args.epsilons.iter().any(|e| !(*e > 0.0)) {
            return Err(Error::InvalidInput("--epsilons needs positive values".into()));
        }
        let source: CurveSource = args.curve.parse()?;
        m.inputs.extend(args.config.iter().map(|p| p.display().to_string()));
        m.inputs.extend(source.input());
        let (curve, velocity) = source.load(template.nodes)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs.unwrap_or(0))
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        let runs: Vec<(f64, String, Result<SimulationReport>)> = pool.install(|| {
            args.epsilons
                .par_iter()
                .enumerate()
                .map(|(k, &eps)| {
                    let config = SimConfig { epsilon: eps, ..template.clone() };
                    let sub = format!("run_{k}_eps_{eps}");
                    let report = simulate_to_dir(&config, curve.clone(), velocity, &dir.join(&sub));
                    (eps, sub, report)
                })
                .collect()
        });

        let mut q_rows = Vec::new();
        let mut summary_rows = Vec::new();
        let mut entries = Vec::new();
        let mut failures = 0;
        for (eps, sub, report) in &runs {
            let fmt = |x: Option<f64>| x.map_or_else(|| "NaN".to_string(), |v| v.to_string());
            match report {
                Ok(r) => {
                    if r.error.is_some() {
                        failures += 1;
                    }
                    q_rows.extend(r.series.iter().map(|s| vec![*eps, s.t, s.q]));
                    summary_rows.push(vec![
                        eps.to_string(),
                        r.regime.clone(),
                        fmt(r.metrics.and_then(|x| x.q_period)),
                        fmt(r.metrics.map(|x| x.q_amplitude)),
                        fmt(r.metrics.map(|x| x.net_displacement)),
                        fmt(r.metrics.map(|x| x.displacement)),
                        sub.clone(),
                    ]);
                    let mut s = report_summary(&template, r);
                    s["epsilon"] = to_json(eps);
                    s["dir"] = to_json(sub);
                    entries.push(s);
                }
                Err(e) => {
                    failures += 1;
                    summary_rows.push(vec![
                        eps.to_string(),
                        "failed".into(),
                        "NaN".into(),
                        "NaN".into(),
                        "NaN".into(),
                        "NaN".into(),
                        sub.clone(),
                    ]);
                    entries.push(serde_json::json!({ "epsilon": eps, "dir": sub, "error": e.to_string() }));
                }
            }
            m.outputs.push(sub.clone());
        }
        crate::io::write_csv(&dir.join("q_series.csv"), &["epsilon", "t", "Q"], q_rows)?;
        write_text_csv(
            &dir.join("summary.csv"),
            &["epsilon", "regime", "q_period", "q_amplitude", "net_displacement", "max_displacement", "dir"],
            &summary_rows,
        )?;
        m.outputs.push("q_series.csv".into());
        m.outputs.push("summary.csv".into());
        m.summary = serde_json::json!({ "runs": entries });
        for row in &summary_rows {
            println!("eps = {}  regime = {}", row[0], row[1]);
        }
        Ok(if failures == runs.len() { EXIT_NUMERICAL } else { EXIT_OK })
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match &cli.command {
        Command::Phi(a) => cmd_phi(a),
        Command::Tw(a) => cmd_tw(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_sources_parse() {
        assert_eq!("circle:2".parse::<CurveSource>().unwrap(), CurveSource::Circle(2.0));
        assert_eq!(
            "ellipse:2:0.5".parse::<CurveSource>().unwrap(),
            CurveSource::Ellipse(2.0, 0.5)
        );
        assert_eq!(
            "tw:a/b.json".parse::<CurveSource>().unwrap(),
            CurveSource::TravelingWave("a/b.json".into())
        );
        for bad in ["circle:-1", "ellipse:1", "square:1", "file:", "circle"] {
            assert!(bad.parse::<CurveSource>().is_err(), "{bad}");
        }
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["sharpcell", "nope"]), EXIT_USAGE);
        assert_eq!(main_with_args(["sharpcell", "sweep", "--curve", "circle:1"]), EXIT_USAGE);
    }

    #[test]
    fn degenerate_tw_box_is_a_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let code = main_with_args(["sharpcell", "tw", "--toy", "--v-range", "0", "0", "--out", out]);
        assert_eq!(code, EXIT_USAGE);
        let m = RunManifest::load(&dir.path().join("manifest.json")).unwrap();
        assert_eq!(m.exit_status, EXIT_USAGE);
    }

    #[test]
    fn toy_phi_table_has_minus_beta_at_zero() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().to_str().unwrap();
        let code = main_with_args(["sharpcell", "phi", "--toy", "--beta", "100", "--out", out]);
        assert_eq!(code, EXIT_OK);
        let text = std::fs::read_to_string(dir.path().join("phi.csv")).unwrap();
        assert!(text.lines().any(|l| l.starts_with("0,-100,")), "no V=0 row");
    }
}
