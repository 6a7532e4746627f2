//! Time loop and output sinks.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::io::create_file;
use crate::potential::StandingWaveProfile;

use super::config::SimConfig;
use super::state::{diagnose, step, DiagnosticsRecord, SimulationState};

/// Receives diagnostics and snapshots as a run progresses.
pub trait Sink {
    fn record(&mut self, rec: &DiagnosticsRecord) -> Result<()>;

    fn snapshot(&mut self, _state: &SimulationState) -> Result<()> {
        Ok(())
    }

    /// Called once at the end, also when the run aborts.
    fn finish(&mut self) -> Result<()> {
        Ok(())
    }
}

/// Keeps every emitted record.
#[derive(Debug, Default)]
pub struct MemorySink {
    pub records: Vec<DiagnosticsRecord>,
}

impl Sink for MemorySink {
    fn record(&mut self, rec: &DiagnosticsRecord) -> Result<()> {
        self.records.push(rec.clone());
        Ok(())
    }
}

type CsvOut = csv::Writer<BufWriter<File>>;

/// Writes `diag.csv`, `trace_<i>.csv` per tracked node and `curve_<step>.csv` snapshots.
pub struct DirectorySink {
    dir: PathBuf,
    diag: CsvOut,
    traces: Vec<(usize, CsvOut)>,
}

fn csv_writer(path: &Path, headers: &[&str]) -> Result<CsvOut> {
    let mut w = csv::Writer::from_writer(create_file(path)?);
    w.write_record(headers).map_err(|e| Error::parse(path, e))?;
    Ok(w)
}

fn write_row(w: &mut CsvOut, path: &Path, row: &[f64]) -> Result<()> {
    w.write_record(row.iter().map(|v| v.to_string()))
        .map_err(|e| Error::parse(path, e))
}

impl DirectorySink {
    pub fn new(dir: &Path, tracked: &[usize]) -> Result<Self> {
        let diag = csv_writer(
            &dir.join("diag.csv"),
            &["t", "Q", "area", "lambda", "cx", "cy", "iters"],
        )?;
        let traces = tracked
            .iter()
            .map(|&i| {
                csv_writer(&dir.join(format!("trace_{i}.csv")), &["t", "V", "V_minus_phi"])
                    .map(|w| (i, w))
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            dir: dir.to_path_buf(),
            diag,
            traces,
        })
    }
}

impl Sink for DirectorySink {
    fn record(&mut self, r: &DiagnosticsRecord) -> Result<()> {
        let path = self.dir.join("diag.csv");
        write_row(
            &mut self.diag,
            &path,
            &[r.t, r.q, r.area, r.lambda, r.centroid.x, r.centroid.y, r.iters as f64],
        )?;
        for (node, w) in &mut self.traces {
            if let Some(s) = r.tracked.iter().find(|s| s.node == *node) {
                let path = self.dir.join(format!("trace_{node}.csv"));
                write_row(w, &path, &[r.t, s.v, s.v - s.phi])?;
            }
        }
        Ok(())
    }

    fn snapshot(&mut self, state: &SimulationState) -> Result<()> {
        state
            .curve
            .write_csv(&self.dir.join(format!("curve_{:08}.csv", state.steps)))
    }

    fn finish(&mut self) -> Result<()> {
        self.diag
            .flush()
            .map_err(|e| Error::io(self.dir.join("diag.csv"), e))?;
        for (node, w) in &mut self.traces {
            w.flush()
                .map_err(|e| Error::io(self.dir.join(format!("trace_{node}.csv")), e))?;
        }
        Ok(())
    }
}

fn emit(sinks: &mut [&mut dyn Sink], rec: &DiagnosticsRecord) -> Result<()> {
    sinks.iter_mut().try_for_each(|s| s.record(rec))
}

fn body(
    state: &mut SimulationState,
    config: &SimConfig,
    profile: &StandingWaveProfile,
    sinks: &mut [&mut dyn Sink],
    series: &mut Vec<DiagnosticsRecord>,
) -> Result<()> {
    let first = diagnose(state, config, profile)?;
    emit(sinks, &first)?;
    series.push(first);
    if config.snapshot_every > 0 {
        sinks.iter_mut().try_for_each(|s| s.snapshot(state))?;
    }
    let total = config.steps();
    for k in 1..=total {
        let rec = step(state, config, profile)?;
        if k % config.output_every == 0 || k == total {
            emit(sinks, &rec)?;
            series.push(rec);
        }
        if config.snapshot_every > 0 && (k % config.snapshot_every == 0 || k == total) {
            sinks.iter_mut().try_for_each(|s| s.snapshot(state))?;
        }
    }
    Ok(())
}

/// Steps until `t_end`, returning the emitted diagnostics series (initial
/// record first). On error the sinks are flushed and `state` holds the last
/// accepted step.
pub fn run(
    state: &mut SimulationState,
    config: &SimConfig,
    profile: &StandingWaveProfile,
    sinks: &mut [&mut dyn Sink],
) -> Result<Vec<DiagnosticsRecord>> {
    config.validate()?;
    let mut series = Vec::new();
    let outcome = body(state, config, profile, sinks, &mut series);
    let flushed = sinks.iter_mut().try_for_each(|s| s.finish());
    outcome.and(flushed).map(|_| series)
}
