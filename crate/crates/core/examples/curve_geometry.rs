//! Discrete curve geometry: curvature convergence of the five-point stencils
//! and equal-chord resampling of an ellipse.
//!
//! ```text
//! cargo run --release --example curve_geometry
//! ```

use sharpcell::{DiscreteCurve, Vec2};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut prev: Option<f64> = None;
    for n in [32, 64, 128, 256] {
        // Perturbed parametrization so the stencils see non-uniform spacing.
        let pts: Vec<Vec2> = (0..n)
            .map(|i| {
                let s = std::f64::consts::TAU * i as f64 / n as f64;
                let t = s + 0.2 * s.sin();
                Vec2::new(t.cos(), t.sin())
            })
            .collect();
        let c = DiscreteCurve::new(pts)?;
        let err = c.curvatures()?.iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max);
        match prev {
            Some(p) => println!("N = {n:4}  max |κ − 1| = {err:.3e}  order {:.2}", (p / err).log2()),
            None => println!("N = {n:4}  max |κ − 1| = {err:.3e}"),
        }
        prev = Some(err);
    }
    let e = DiscreteCurve::ellipse(3.0, 1.0, 400, Vec2::ZERO)?;
    let r = e.resample_equal_arclength(256)?;
    let seg = r.segment_lengths();
    let (lo, hi) = seg.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &s| (a.min(s), b.max(s)));
    println!(
        "ellipse 3:1 resampled to 256 chords: spread {:.2e}, area {:.8} -> {:.8}, Q = {:.6}",
        (hi - lo) / hi,
        e.shoelace_area(),
        r.shoelace_area(),
        r.isoperimetric_quotient()
    );
    Ok(())
}
