//! Periodic discrete closed curves.
//!
//! Points are indexed `0..N` with `p_{i+N} = p_i` and parameter spacing
//! `h = 1/N`. Derivatives use the five-point stencils
//!
//! ```text
//! D p_i  = (−p_{i+2} + 8p_{i+1} − 8p_{i−1} + p_{i−2}) / (12h)
//! D²p_i = (−p_{i+2} + 16p_{i+1} − 30p_i + 16p_{i−1} − p_{i−2}) / (12h²)
//! ```
//!
//! Curves built with [`DiscreteCurve::new`] are counterclockwise.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::PeriodicSpline;
use crate::io::{read_csv_columns, write_csv};

pub const MIN_NODES: usize = 8;

/// Tangents shorter than this are treated as degenerate.
pub const MIN_TANGENT_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Rotation by +π/2.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Signed shoelace area, positive for counterclockwise polygons.
pub fn signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    0.5 * (0..n)
        .map(|i| points[i].cross(points[(i + 1) % n]))
        .sum::<f64>()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    points: Vec<Vec2>,
}

impl DiscreteCurve {
    /// Validates the points and reverses their order if they run clockwise.
    pub fn new(mut points: Vec<Vec2>) -> Result<Self> {
        Self::validate(&points)?;
        if signed_area(&points) < 0.0 {
            points.reverse();
        }
        Ok(Self { points })
    }

    /// Like [`DiscreteCurve::new`] but keeps the given orientation.
    pub fn preserving_orientation(points: Vec<Vec2>) -> Result<Self> {
        Self::validate(&points)?;
        Ok(Self { points })
    }

    fn validate(points: &[Vec2]) -> Result<()> {
        let n = points.len();
        if n < MIN_NODES {
            return Err(Error::InvalidInput(format!(
                "a curve needs at least {MIN_NODES} points, got {n}"
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
        for i in 0..n {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::InvalidInput(format!(
                    "points {i} and {} coincide",
                    (i + 1) % n
                )));
            }
        }
        Ok(())
    }

    pub fn from_xy(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput("x and y lengths differ".into()));
        }
        Self::new(x.iter().zip(y).map(|(&x, &y)| Vec2::new(x, y)).collect())
    }

    /// `p_i = c + R(cos 2πih, sin 2πih)`.
    pub fn circle(radius: f64, n: usize, center: Vec2) -> Result<Self> {
        Self::ellipse(radius, radius, n, center)
    }

    pub fn ellipse(a: f64, b: f64, n: usize, center: Vec2) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::InvalidInput(format!(
                "ellipse semi-axes must be positive, got {a}, {b}"
            )));
        }
        let h = 1.0 / n as f64;
        Self::new(
            (0..n)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 * h;
                    center + Vec2::new(a * t.cos(), b * t.sin())
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Vec2> {
        self.points
    }

    /// Parameter spacing `1/N`.
    pub fn h(&self) -> f64 {
        1.0 / self.len() as f64
    }

    /// Periodic access.
    pub fn point(&self, i: isize) -> Vec2 {
        self.points[i.rem_euclid(self.len() as isize) as usize]
    }

    pub fn stencil_d1(&self, i: usize) -> Vec2 {
        let i = i as isize;
        let h = self.h();
        (self.point(i - 2) - self.point(i + 2) + 8.0 * (self.point(i + 1) - self.point(i - 1)))
            * (1.0 / (12.0 * h))
    }

    pub fn stencil_d2(&self, i: usize) -> Vec2 {
        let i = i as isize;
        let h = self.h();
        (16.0 * (self.point(i + 1) + self.point(i - 1))
            - (self.point(i + 2) + self.point(i - 2))
            - 30.0 * self.point(i))
            * (1.0 / (12.0 * h * h))
    }

    fn tangent(&self, i: usize) -> Result<(Vec2, f64)> {
        let d = self.stencil_d1(i);
        let norm = d.norm();
        if !(norm > MIN_TANGENT_NORM) {
            return Err(Error::DegenerateTangent { node: i, norm });
        }
        Ok((d, norm))
    }

    /// `det(Dp, D²p) / |Dp|³`.
    pub fn curvature(&self, i: usize) -> Result<f64> {
        let (d1, norm) = self.tangent(i)?;
        Ok(d1.cross(self.stencil_d2(i)) / (norm * norm * norm))
    }

    pub fn curvatures(&self) -> Result<Vec<f64>> {
        (0..self.len()).map(|i| self.curvature(i)).collect()
    }

    /// Unit tangent rotated by +π/2; points inward for counterclockwise curves.
    pub fn inward_normal(&self, i: usize) -> Result<Vec2> {
        let (d1, norm) = self.tangent(i)?;
        Ok(d1.perp() * (1.0 / norm))
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    pub fn shoelace_area(&self) -> f64 {
        self.signed_area().abs()
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| (self.points[(i + 1) % n] - self.points[i]).norm())
            .collect()
    }

    pub fn length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    /// Area centroid of the polygon.
    pub fn centroid(&self) -> Vec2 {
        let n = self.len();
        let mut c = Vec2::ZERO;
        let mut a2 = 0.0;
        for i in 0..n {
            let (p, q) = (self.points[i], self.points[(i + 1) % n]);
            let w = p.cross(q);
            a2 += w;
            c += (p + q) * w;
        }
        c * (1.0 / (3.0 * a2))
    }

    /// `4π A / L²`.
    pub fn isoperimetric_quotient(&self) -> f64 {
        let l = self.length();
        4.0 * std::f64::consts::PI * self.shoelace_area() / (l * l)
    }

    /// Largest distance between two nodes.
    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (k, p) in self.points.iter().enumerate() {
            for q in &self.points[k + 1..] {
                d = d.max((*p - *q).norm());
            }
        }
        d
    }

    /// `Σ κ_i |Dp_i| h`, which is 2π for simple counterclockwise curves.
    pub fn total_turning(&self) -> Result<f64> {
        let h = self.h();
        (0..self.len())
            .map(|i| Ok(self.curvature(i)? * self.stencil_d1(i).norm() * h))
            .sum()
    }

    pub fn translated(&self, by: Vec2) -> DiscreteCurve {
        DiscreteCurve {
            points: self.points.iter().map(|&p| p + by).collect(),
        }
    }

    /// Pairs of non-adjacent segments `(i, j)`, `i < j`, that intersect.
    pub fn self_intersections(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let p = &self.points;
        let mut hits = Vec::new();
        for i in 0..n {
            let (a, b) = (p[i], p[(i + 1) % n]);
            let (lo_x, hi_x) = (a.x.min(b.x), a.x.max(b.x));
            let (lo_y, hi_y) = (a.y.min(b.y), a.y.max(b.y));
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let (c, d) = (p[j], p[(j + 1) % n]);
                if c.x.max(d.x) < lo_x || c.x.min(d.x) > hi_x || c.y.max(d.y) < lo_y || c.y.min(d.y) > hi_y {
                    continue;
                }
                if segments_intersect(a, b, c, d) {
                    hits.push((i, j));
                }
            }
        }
        hits
    }

    pub fn is_simple(&self) -> bool {
        self.self_intersections().is_empty()
    }

    /// Resamples to `n_new` points with equal chords on a periodic cubic spline
    /// through the current points (chord-length parametrized).
    pub fn resample_equal_arclength(&self, n_new: usize) -> Result<DiscreteCurve> {
        Ok(self.resample_with_map(n_new)?.0)
    }

    /// Resampling plus the map from new nodes to positions along the old curve.
    pub fn resample_with_map(&self, n_new: usize) -> Result<(DiscreteCurve, ResampleMap)> {
        if n_new < MIN_NODES {
            return Err(Error::InvalidInput(format!(
                "cannot resample to {n_new} < {MIN_NODES} points"
            )));
        }
        let seg = self.segment_lengths();
        let n = self.len();
        let mut knots = Vec::with_capacity(n);
        let mut acc = 0.0;
        for s in &seg {
            knots.push(acc);
            acc += s;
        }
        let period = acc;
        let sx = PeriodicSpline::new(knots.clone(), period, self.points.iter().map(|p| p.x).collect())?;
        let sy = PeriodicSpline::new(knots.clone(), period, self.points.iter().map(|p| p.y).collect())?;
        let eval = |t: f64| Vec2::new(sx.value(t), sy.value(t));

        // March with a fixed chord; returns the parameters and the closure overshoot.
        let march = |chord: f64| -> Result<(Vec<f64>, f64)> {
            let mut ts = Vec::with_capacity(n_new + 1);
            let mut t = 0.0;
            ts.push(t);
            for _ in 0..n_new {
                t = next_at_chord(&eval, t, chord, period)?;
                ts.push(t);
            }
            let overshoot = ts[n_new] - period;
            ts.truncate(n_new);
            Ok((ts, overshoot))
        };

        let mut c0 = period / n_new as f64;
        let (mut ts, mut f0) = march(c0)?;
        let mut c1 = c0 * (1.0 - f0 / period);
        for _ in 0..60 {
            if f0.abs() <= 1e-13 * period {
                break;
            }
            let (t1, f1) = march(c1)?;
            ts = t1;
            if f1.abs() <= 1e-13 * period || f1 == f0 {
                f0 = f1;
                break;
            }
            let c2 = c1 - f1 * (c1 - c0) / (f1 - f0);
            c0 = c1;
            f0 = f1;
            c1 = c2;
        }
        if f0.abs() > 1e-9 * period {
            return Err(Error::InvalidInput(format!(
                "equal-chord resampling did not close (gap {f0:e})"
            )));
        }
        let points: Vec<Vec2> = ts.iter().map(|&t| eval(t)).collect();
        let curve = DiscreteCurve::preserving_orientation(points)?;
        Ok((
            curve,
            ResampleMap {
                knots,
                period,
                targets: ts,
            },
        ))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_csv(path, &["x", "y"], self.points.iter().map(|p| vec![p.x, p.y]))
    }

    /// Reads columns `x, y`. A repeated closing point is dropped.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let cols = read_csv_columns(path, &["x", "y"])?;
        let mut pts: Vec<Vec2> = cols[0]
            .iter()
            .zip(&cols[1])
            .map(|(&x, &y)| Vec2::new(x, y))
            .collect();
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        Self::new(pts)
    }
}

/// Smallest parameter `t > t0` with `|S(t) − S(t0)| = chord`.
fn next_at_chord(eval: &impl Fn(f64) -> Vec2, t0: f64, chord: f64, period: f64) -> Result<f64> {
    let p0 = eval(t0);
    let g = |t: f64| (eval(t) - p0).norm() - chord;
    let mut lo = t0;
    let mut hi = t0 + chord;
    let mut g_hi = g(hi);
    let mut g_lo = -chord;
    let mut grow = 0;
    while g_hi < 0.0 {
        lo = hi;
        g_lo = g_hi;
        hi += 0.5 * chord;
        g_hi = g(hi);
        grow += 1;
        if grow > 200 || hi > t0 + period {
            return Err(Error::InvalidInput("resampling chord exceeds curve size".into()));
        }
    }
    // Illinois variant of regula falsi.
    let mut side = 0;
    for _ in 0..200 {
        let t = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        let gt = g(t);
        if gt.abs() <= 1e-15 * chord || hi - lo <= 1e-15 * period {
            return Ok(t);
        }
        if gt < 0.0 {
            lo = t;
            g_lo = gt;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = t;
            g_hi = gt;
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn segments_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Vec2, q: Vec2, r: Vec2| {
        r.x >= p.x.min(q.x) && r.x <= p.x.max(q.x) && r.y >= p.y.min(q.y) && r.y <= p.y.max(q.y)
    };
    (d1 == 0.0 && on(a, b, c))
        || (d2 == 0.0 && on(a, b, d))
        || (d3 == 0.0 && on(c, d, a))
        || (d4 == 0.0 && on(c, d, b))
}

/// Positions of resampled nodes along the old curve, in old chord-length units.
#[derive(Debug, Clone)]
pub struct ResampleMap {
    knots: Vec<f64>,
    period: f64,
    targets: Vec<f64>,
}

impl ResampleMap {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    /// Four-point Lagrange weights `(old index, weight)` for new node `i`.
    pub fn weights(&self, i: usize) -> [(usize, f64); 4] {
        let n = self.knots.len();
        let t = self.targets[i].rem_euclid(self.period);
        let k = match self.knots.binary_search_by(|probe| probe.total_cmp(&t)) {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) => k - 1,
        };
        // Unwrapped abscissae of old nodes k-1..k+2.
        let node = |offset: isize| -> (usize, f64) {
            let j = k as isize + offset;
            let wraps = j.div_euclid(n as isize);
            let idx = j.rem_euclid(n as isize) as usize;
            (idx, self.knots[idx] + wraps as f64 * self.period)
        };
        let nodes = [node(-1), node(0), node(1), node(2)];
        let mut out = [(0, 0.0); 4];
        for a in 0..4 {
            let mut w = 1.0;
            for b in 0..4 {
                if a != b {
                    w *= (t - nodes[b].1) / (nodes[a].1 - nodes[b].1);
                }
            }
            out[a] = (nodes[a].0, w);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    fn circle(r: f64, n: usize) -> DiscreteCurve {
        DiscreteCurve::circle(r, n, Vec2::ZERO).unwrap()
    }

    /// A smooth star-like trigonometric curve and its exact derivatives in the parameter.
    fn trig_curve(n: usize) -> (DiscreteCurve, impl Fn(f64) -> (Vec2, Vec2, Vec2)) {
        let r = |t: f64| 1.0 + 0.2 * (3.0 * t).cos() + 0.1 * (2.0 * t).sin();
        let dr = |t: f64| -0.6 * (3.0 * t).sin() + 0.2 * (2.0 * t).cos();
        let ddr = |t: f64| -1.8 * (3.0 * t).cos() - 0.4 * (2.0 * t).sin();
        let exact = move |s: f64| {
            let t = TAU * s;
            let (c, si) = (t.cos(), t.sin());
            let p = Vec2::new(r(t) * c, r(t) * si);
            let dp = Vec2::new(dr(t) * c - r(t) * si, dr(t) * si + r(t) * c) * TAU;
            let ddp = Vec2::new(
                ddr(t) * c - 2.0 * dr(t) * si - r(t) * c,
                ddr(t) * si + 2.0 * dr(t) * c - r(t) * si,
            ) * (TAU * TAU);
            (p, dp, ddp)
        };
        let pts = (0..n).map(|i| exact(i as f64 / n as f64).0).collect();
        (DiscreteCurve::new(pts).unwrap(), exact)
    }

    #[test]
    fn circle_first_derivative() {
        let c = circle(1.0, 256);
        let h = c.h();
        let err = (0..256)
            .map(|i| {
                let t = TAU * i as f64 * h;
                (c.stencil_d1(i) - Vec2::new(-TAU * t.sin(), TAU * t.cos())).norm()
            })
            .fold(0.0, f64::max);
        // O(h⁴) with the constant (2π)⁵/30.
        assert!(err < 400.0 * h.powi(4), "{err}");
    }

    #[test]
    fn constant_curve_has_zero_stencils() {
        let pts = vec![Vec2::new(1.5, -2.0); 10];
        let c = DiscreteCurve { points: pts };
        for i in 0..10 {
            assert_eq!(c.stencil_d1(i), Vec2::ZERO);
            assert_eq!(c.stencil_d2(i), Vec2::ZERO);
        }
    }

    #[test]
    fn trig_curve_stencils_converge_at_fourth_order() {
        let mut errs = vec![];
        for n in [64, 128, 256] {
            let (c, exact) = trig_curve(n);
            let e = (0..n)
                .map(|i| {
                    let (_, dp, ddp) = exact(i as f64 / n as f64);
                    (c.stencil_d1(i) - dp).norm().max((c.stencil_d2(i) - ddp).norm() / TAU)
                })
                .fold(0.0, f64::max);
            errs.push(e);
        }
        for k in 0..2 {
            let order = (errs[k] / errs[k + 1]).log2();
            assert!((order - 4.0).abs() < 0.3, "order {order}");
        }
    }

    #[test]
    fn circle_curvature_and_orientation() {
        let c = circle(2.0, 256);
        for k in c.curvatures().unwrap() {
            assert!((k - 0.5).abs() < 1e-6);
        }
        let mut pts = circle(1.0, 64).into_points();
        pts.reverse();
        let cw = DiscreteCurve::preserving_orientation(pts.clone()).unwrap();
        assert!((cw.curvature(5).unwrap() + 1.0).abs() < 1e-4);
        // Normal construction flips it back.
        let ccw = DiscreteCurve::new(pts).unwrap();
        assert!(ccw.signed_area() > 0.0);
    }

    #[test]
    fn ellipse_curvature_at_vertex() {
        let c = DiscreteCurve::ellipse(2.0, 1.0, 512, Vec2::ZERO).unwrap();
        // ab / (a² sin² + b² cos²)^{3/2} at t = 0.
        assert!((c.curvature(0).unwrap() - 2.0).abs() < 1e-4);
    }

    #[test]
    fn curvature_converges_at_fourth_order() {
        let mut errs = vec![];
        for n in [64, 128, 256] {
            let (c, exact) = trig_curve(n);
            let e = (0..n)
                .map(|i| {
                    let (_, dp, ddp) = exact(i as f64 / n as f64);
                    let k = dp.cross(ddp) / dp.norm().powi(3);
                    (c.curvature(i).unwrap() - k).abs()
                })
                .fold(0.0, f64::max);
            errs.push(e);
        }
        for k in 0..2 {
            let order = (errs[k] / errs[k + 1]).log2();
            assert!((order - 4.0).abs() < 0.3, "order {order}");
        }
    }

    #[test]
    fn degenerate_tangent_is_reported() {
        let mut pts = circle(1.0, 16).into_points();
        // Make p_{i+1}-p_{i-1} and p_{i+2}-p_{i-2} cancel at node 0.
        pts[1] = pts[15];
        pts[2] = pts[14];
        let c = DiscreteCurve { points: pts };
        assert!(matches!(c.curvature(0), Err(Error::DegenerateTangent { node: 0, .. })));
    }

    #[test]
    fn polygon_measures() {
        let sq = DiscreteCurve {
            points: vec![
                Vec2::new(0.0, 0.0),
                Vec2::new(1.0, 0.0),
                Vec2::new(1.0, 1.0),
                Vec2::new(0.0, 1.0),
            ],
        };
        assert_eq!(sq.shoelace_area(), 1.0);
        assert!((sq.isoperimetric_quotient() - PI / 4.0).abs() < 1e-15);
        assert_eq!(sq.centroid(), Vec2::new(0.5, 0.5));
        let tri = DiscreteCurve {
            points: vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)],
        };
        assert_eq!(tri.shoelace_area(), 0.5);
        for n in [8usize, 100, 1024] {
            let c = circle(1.0, n);
            let nf = n as f64;
            assert!((c.shoelace_area() - 0.5 * nf * (TAU / nf).sin()).abs() < 1e-12);
            assert!((c.length() - 2.0 * nf * (PI / nf).sin()).abs() < 1e-12);
        }
        assert!((circle(1.0, 1024).isoperimetric_quotient() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn ellipse_quotient_matches_elliptic_perimeter() {
        let c = DiscreteCurve::ellipse(2.0, 1.0, 512, Vec2::ZERO).unwrap();
        let perimeter = crate::quadrature::integrate(
            |t: f64| Ok((4.0 * t.sin().powi(2) + t.cos().powi(2)).sqrt()),
            0.0,
            TAU,
            Default::default(),
        )
        .unwrap();
        let q = 4.0 * PI * (2.0 * PI) / (perimeter * perimeter);
        assert!((c.isoperimetric_quotient() - q).abs() < 1e-4);
    }

    #[test]
    fn inward_normals() {
        let c = circle(1.0, 64);
        assert!((c.inward_normal(0).unwrap() - Vec2::new(-1.0, 0.0)).norm() < 1e-6);
        assert!((c.inward_normal(16).unwrap() - Vec2::new(0.0, -1.0)).norm() < 1e-6);
        let (c, _) = trig_curve(200);
        let g = c.centroid();
        for i in 0..c.len() {
            assert!(c.inward_normal(i).unwrap().dot(g - c.points()[i]) > 0.0);
        }
    }

    #[test]
    fn area_is_rigid_motion_invariant() {
        let (c, _) = trig_curve(300);
        let a = c.shoelace_area();
        let (s, co) = 0.7f64.sin_cos();
        let moved = DiscreteCurve::new(
            c.points()
                .iter()
                .map(|p| Vec2::new(co * p.x - s * p.y + 3.0, s * p.x + co * p.y - 1.25))
                .collect(),
        )
        .unwrap();
        assert!((moved.shoelace_area() - a).abs() < 1e-12);
    }

    #[test]
    fn total_turning_is_two_pi() {
        let (c, _) = trig_curve(512);
        assert!((c.total_turning().unwrap() - TAU).abs() < 1e-3);
    }

    #[test]
    fn resampling_equalizes_chords() {
        let c = circle(1.0, 100).resample_equal_arclength(200).unwrap();
        let seg = c.segment_lengths();
        let max = seg.iter().cloned().fold(0.0, f64::max);
        let min = seg.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max - min < 1e-8);

        let e = DiscreteCurve::ellipse(3.0, 1.0, 300, Vec2::ZERO).unwrap();
        let r = e.resample_equal_arclength(300).unwrap();
        let seg = r.segment_lengths();
        let mean = seg.iter().sum::<f64>() / seg.len() as f64;
        let var = seg.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / seg.len() as f64;
        assert!(var.sqrt() / mean < 1e-6);
        assert!((r.shoelace_area() - e.shoelace_area()).abs() / e.shoelace_area() < 1e-4);
    }

    #[test]
    fn resampling_is_idempotent_on_equal_chords() {
        let c = circle(1.3, 128);
        let r = c.resample_equal_arclength(128).unwrap();
        for (p, q) in c.points().iter().zip(r.points()) {
            assert!((*p - *q).norm() < 1e-10);
        }
    }

    #[test]
    fn resampling_refinement_keeps_area() {
        // Polygon area moves by O(h²) when vertices are redistributed, so the
        // 1e-6 bound needs a fine curve.
        let c = DiscreteCurve::ellipse(3.0, 1.0, 4096, Vec2::ZERO).unwrap();
        for n_new in [4096, 8192] {
            let r = c.resample_equal_arclength(n_new).unwrap();
            assert!((r.shoelace_area() - c.shoelace_area()).abs() / c.shoelace_area() < 1e-6);
        }
    }

    #[test]
    fn lagrange_map_reproduces_cubics_in_arclength() {
        let (c, _) = trig_curve(120);
        let (_, map) = c.resample_with_map(90).unwrap();
        // A smooth periodic function of old arclength.
        let knots = map.knots.clone();
        let period = map.period;
        let f = |t: f64| (TAU * t / period).sin();
        let old: Vec<f64> = knots.iter().map(|&t| f(t)).collect();
        for i in 0..map.len() {
            let v: f64 = map.weights(i).iter().map(|&(j, w)| w * old[j]).sum();
            assert!((v - f(map.targets[i])).abs() < 1e-5);
        }
    }

    #[test]
    fn self_intersection_detection() {
        assert!(circle(1.0, 64).is_simple());
        // Figure-eight.
        let pts: Vec<Vec2> = (0..80)
            .map(|i| {
                let t = TAU * i as f64 / 80.0;
                Vec2::new(t.sin(), (2.0 * t).sin() * 0.5)
            })
            .collect();
        let c = DiscreteCurve::preserving_orientation(pts).unwrap();
        assert!(!c.is_simple());
    }

    #[test]
    fn rejects_bad_curves() {
        assert!(DiscreteCurve::new(vec![Vec2::ZERO; 4]).is_err());
        let mut pts = circle(1.0, 10).into_points();
        pts[3] = pts[4];
        assert!(DiscreteCurve::new(pts).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let (c, _) = trig_curve(64);
        c.write_csv(&path).unwrap();
        assert_eq!(DiscreteCurve::read_csv(&path).unwrap(), c);
    }
}
