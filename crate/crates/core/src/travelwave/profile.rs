//! Assembly of closed traveling-wave curves from the three shooting arcs.
//!
//! The right half-curve runs counterclockwise from the rear pole at the
//! origin (tangent along +x) to the front pole on the y-axis; the left half is
//! its mirror image. The wave travels in the +y direction.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Vec2};
use crate::io::{create_file, read_csv_columns, write_csv};
use crate::nonlinearity::PhiFunction;

use super::closure::{shoot_closure, ClosureArcs};
use super::shoot::ShootOptions;

#[derive(Debug, Clone)]
pub struct TravelingWaveProfile {
    /// Counterclockwise, equal chords, starting at the rear pole.
    pub curve: DiscreteCurve,
    pub v: f64,
    pub lambda: f64,
    pub beta: Option<f64>,
    /// `|I₂|` at `(V, λ)`.
    pub closure_residual: f64,
    /// Horizontal miss of the front pole from the mirror axis, doubled.
    pub closure_gap: f64,
    /// Tangent-angle jumps (radians) at the back/side, side/front and front/mirror joints.
    pub tangent_jumps: [f64; 3],
}

/// JSON companion of a profile CSV.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProfileMetadata {
    #[serde(rename = "V")]
    pub v: f64,
    pub lambda: f64,
    pub beta: Option<f64>,
    pub closure_residual: f64,
    pub closure_gap: f64,
    pub tangent_jumps: [f64; 3],
    pub nodes: usize,
    pub area: f64,
    pub length: f64,
    /// Profile CSV, relative to the JSON file.
    pub curve_csv: String,
}

fn angle_between(a: Vec2, b: Vec2) -> f64 {
    a.cross(b).atan2(a.dot(b)).abs()
}

/// Right half-curve in the original frame, from the rear pole to the front pole.
fn right_half(arcs: &ClosureArcs) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = arcs
        .back
        .x
        .iter()
        .zip(&arcs.back.y)
        .map(|(&x, &y)| Vec2::new(x, y))
        .collect();
    let p1 = Vec2::new(arcs.back.x_end, arcs.back.y_end);
    pts.extend(
        arcs.side
            .x
            .iter()
            .zip(&arcs.side.y)
            .skip(1)
            .map(|(&xi, &y)| p1 + Vec2::new(-y, xi)),
    );
    let p2 = p1 + Vec2::new(-arcs.side.y_end, arcs.side.x_end);
    pts.extend(
        arcs.front
            .x
            .iter()
            .zip(&arcs.front.y)
            .skip(1)
            .map(|(&xi, &y)| p2 + Vec2::new(-xi, -y)),
    );
    pts
}

/// Shoots the arcs at `(V, λ)` and assembles a closed curve with `nodes` points.
pub fn assemble_profile(
    phi: &PhiFunction,
    v: f64,
    lambda: f64,
    nodes: usize,
) -> Result<TravelingWaveProfile> {
    let coarse = shoot_closure(v, lambda, phi, &ShootOptions::default())?;
    let scale = coarse
        .back
        .x_end
        .max(coarse.side.x_end)
        .max(coarse.span.abs());
    let opts = ShootOptions {
        max_step: scale / 400.0,
        ..Default::default()
    };
    let arcs = shoot_closure(v, lambda, phi, &opts)?;
    let half = right_half(&arcs);
    let top = *half.last().expect("arcs are never empty");

    // Drop near-duplicates left by event location so the spline stays well posed.
    let min_gap = 1e-9 * scale;
    let mut raw: Vec<Vec2> = Vec::with_capacity(2 * half.len());
    for &p in &half[..half.len() - 1] {
        if raw.last().map_or(true, |q: &Vec2| (p - *q).norm() > min_gap) {
            raw.push(p);
        }
    }
    raw.push(Vec2::new(0.0, top.y));
    let right_len = raw.len();
    for k in (1..right_len - 1).rev() {
        let p = raw[k];
        raw.push(Vec2::new(-p.x, p.y));
    }
    let curve = DiscreteCurve::new(raw)?.resample_equal_arclength(nodes)?;

    let wb = arcs.back.w_end;
    let wr = arcs.side.w_end;
    let i2 = arcs.i2();
    let tangent_jumps = [
        angle_between(Vec2::new(1.0, wb), Vec2::new(wb, 1.0)),
        angle_between(Vec2::new(-wr, 1.0), Vec2::new(-1.0, wr)),
        angle_between(Vec2::new(-1.0, -i2), Vec2::new(-1.0, i2)),
    ];
    Ok(TravelingWaveProfile {
        curve,
        v,
        lambda,
        beta: phi.beta(),
        closure_residual: i2.abs(),
        closure_gap: 2.0 * top.x.abs(),
        tangent_jumps,
    })
}

impl TravelingWaveProfile {
    /// Velocity of the rigid translation.
    pub fn velocity(&self) -> Vec2 {
        Vec2::new(0.0, self.v)
    }

    pub fn metadata(&self, curve_csv: &str) -> ProfileMetadata {
        ProfileMetadata {
            v: self.v,
            lambda: self.lambda,
            beta: self.beta,
            closure_residual: self.closure_residual,
            closure_gap: self.closure_gap,
            tangent_jumps: self.tangent_jumps,
            nodes: self.curve.len(),
            area: self.curve.shoelace_area(),
            length: self.curve.length(),
            curve_csv: curve_csv.to_string(),
        }
    }

    /// Writes `<stem>.csv` (closed polygon, first point repeated) and `<stem>.json`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let csv_name = format!("{stem}.csv");
        let pts = self.curve.points();
        write_csv(
            &dir.join(&csv_name),
            &["x", "y"],
            pts.iter().chain(pts.first()).map(|p| vec![p.x, p.y]),
        )?;
        let json_path = dir.join(format!("{stem}.json"));
        let file = create_file(&json_path)?;
        serde_json::to_writer_pretty(file, &self.metadata(&csv_name))
            .map_err(|e| Error::parse(&json_path, e))?;
        Ok(json_path)
    }

    /// Reads a profile written by [`TravelingWaveProfile::write`].
    pub fn load(json_path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(json_path).map_err(|e| Error::io(json_path, e))?;
        let meta: ProfileMetadata =
            serde_json::from_str(&text).map_err(|e| Error::parse(json_path, e))?;
        let csv_path = json_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(&meta.curve_csv);
        let cols = read_csv_columns(&csv_path, &["x", "y"])?;
        let mut pts: Vec<Vec2> = cols[0]
            .iter()
            .zip(&cols[1])
            .map(|(&x, &y)| Vec2::new(x, y))
            .collect();
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        Ok(Self {
            curve: DiscreteCurve::new(pts)?,
            v: meta.v,
            lambda: meta.lambda,
            beta: meta.beta,
            closure_residual: meta.closure_residual,
            closure_gap: meta.closure_gap,
            tangent_jumps: meta.tangent_jumps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_speed_profile_is_a_circle() {
        let phi = PhiFunction::toy(0.0);
        let p = assemble_profile(&phi, 0.0, 2.0, 128).unwrap();
        let c = p.curve.centroid();
        assert!(c.x.abs() < 1e-9 && (c.y - 0.5).abs() < 1e-6);
        for q in p.curve.points() {
            assert!(((*q - c).norm() - 0.5).abs() < 1e-6);
        }
        assert!(p.closure_residual < 1e-10);
        assert!(p.tangent_jumps.iter().all(|&j| j < 1e-8));
        assert!(p.curve.signed_area() > 0.0);
    }

    #[test]
    fn write_and_load_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let phi = PhiFunction::toy(0.0);
        let p = assemble_profile(&phi, 0.0, 3.0, 64).unwrap();
        let json = p.write(dir.path(), "profile_0").unwrap();
        let back = TravelingWaveProfile::load(&json).unwrap();
        assert_eq!(back.curve, p.curve);
        assert_eq!(back.v, p.v);
        assert_eq!(back.lambda, p.lambda);
    }
}
