use super::*;
use crate::geometry::{DiscreteCurve, Vec2};
use crate::potential::{PotentialWell, StandingWaveProfile};

fn cfg(beta: f64, nodes: usize) -> SimConfig {
    SimConfig {
        beta,
        nodes,
        well: PotentialWell::AllenCahn,
        intervals: 200,
        dt: 1e-5,
        t_end: 1e-3,
        output_every: 1,
        ..Default::default()
    }
}

fn profile(c: &SimConfig) -> StandingWaveProfile {
    c.standing_wave().unwrap()
}

#[test]
fn zero_beta_gives_zero_actin() {
    let c = cfg(0.0, 32);
    let p = profile(&c);
    let curve = DiscreteCurve::ellipse(2.0, 1.0, 32, Vec2::ZERO).unwrap();
    let s = init_state(curve, &p, &c, Some(Vec2::new(0.0, 1.5))).unwrap();
    assert_eq!(s.actin.max_abs(), 0.0);
}

#[test]
fn circle_columns_are_identical() {
    let c = cfg(100.0, 64);
    let p = profile(&c);
    let s = init_state(DiscreteCurve::circle(1.0, 64, Vec2::ZERO).unwrap(), &p, &c, None).unwrap();
    let first = s.actin.column(0).to_vec();
    for i in 0..64 {
        let col = s.actin.column(i);
        assert_eq!(col[0], 0.0);
        assert_eq!(col[col.len() - 1], 0.0);
        for (a, b) in col.iter().zip(&first) {
            assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn translation_speeds_are_normal_projections() {
    let c = cfg(100.0, 64);
    let p = profile(&c);
    let curve = DiscreteCurve::ellipse(1.0, 2.0, 64, Vec2::ZERO).unwrap();
    let u = Vec2::new(0.0, 1.7);
    let s = init_state(curve.clone(), &p, &c, Some(u)).unwrap();
    // A column solved for speed V has Φ equal to the direct Φ(V).
    for i in 0..64 {
        let v = u.dot(curve.inward_normal(i).unwrap());
        assert!(v.abs() <= 1.7 + 1e-12);
        let direct = crate::nonlinearity::phi_direct(&p, v, 100.0).unwrap();
        let w = crate::nonlinearity::weighted_integral(&p, s.actin.column(i));
        assert!((w - direct).abs() < 1e-12);
    }
    // Poles of the ellipse sit at nodes 16 (top) and 48 (bottom).
    let v16 = u.dot(curve.inward_normal(16).unwrap());
    let v48 = u.dot(curve.inward_normal(48).unwrap());
    assert!((v16 + 1.7).abs() < 1e-9 && (v48 - 1.7).abs() < 1e-9);
}

#[test]
fn grid_mismatch_is_rejected() {
    let c = cfg(1.0, 32);
    let p = crate::potential::solve_standing_wave(&PotentialWell::AllenCahn, 20.0, 400).unwrap();
    let curve = DiscreteCurve::circle(1.0, 32, Vec2::ZERO).unwrap();
    assert!(init_state(curve, &p, &c, None).is_err());
}

#[test]
fn circle_without_forcing_does_not_move() {
    let c = cfg(0.0, 64);
    let p = profile(&c);
    let curve = DiscreteCurve::circle(1.0, 64, Vec2::new(0.3, -0.2)).unwrap();
    let mut s = init_state(curve.clone(), &p, &c, None).unwrap();
    for v in normal_velocities(&s, &p).unwrap() {
        assert!(v.abs() < 1e-10);
    }
    for _ in 0..20 {
        step(&mut s, &c, &p).unwrap();
    }
    for (a, b) in s.curve.points().iter().zip(curve.points()) {
        assert!((*a - *b).norm() < 1e-10);
    }
}

#[test]
fn ellipse_rounds_up_with_area_held() {
    let mut c = cfg(0.0, 64);
    c.dt = 2e-4;
    c.t_end = 1.0;
    c.output_every = 25;
    let p = profile(&c);
    let curve = DiscreteCurve::ellipse(1.6, 0.8, 64, Vec2::ZERO).unwrap();
    let mut s = init_state(curve, &p, &c, None).unwrap();
    let a0 = s.area0;
    let mut sink = MemorySink::default();
    let series = run(&mut s, &c, &p, &mut [&mut sink]).unwrap();
    assert_eq!(series, sink.records);
    for w in series.windows(2) {
        assert!(w[1].q > w[0].q);
    }
    for r in &series {
        assert!((r.area - a0).abs() / a0 <= c.err);
    }
    assert!(series.last().unwrap().q > 0.99);
}

/// Straightforward one-step curvature flow: fourth-order differences, mean
/// curvature by arclength, area restored by solving the quadratic in λ.
fn reference_step(pts: &[Vec2], dt: f64) -> Vec<Vec2> {
    let n = pts.len();
    let h = 1.0 / n as f64;
    let at = |i: isize| pts[i.rem_euclid(n as isize) as usize];
    let mut kappa = vec![0.0; n];
    let mut nu = vec![Vec2::ZERO; n];
    let mut speed = vec![0.0; n];
    for i in 0..n as isize {
        let d1x = (at(i - 2).x - 8.0 * at(i - 1).x + 8.0 * at(i + 1).x - at(i + 2).x) / (12.0 * h);
        let d1y = (at(i - 2).y - 8.0 * at(i - 1).y + 8.0 * at(i + 1).y - at(i + 2).y) / (12.0 * h);
        let d2x = (-at(i - 2).x + 16.0 * at(i - 1).x - 30.0 * at(i).x + 16.0 * at(i + 1).x
            - at(i + 2).x)
            / (12.0 * h * h);
        let d2y = (-at(i - 2).y + 16.0 * at(i - 1).y - 30.0 * at(i).y + 16.0 * at(i + 1).y
            - at(i + 2).y)
            / (12.0 * h * h);
        let s = (d1x * d1x + d1y * d1y).sqrt();
        let k = i as usize;
        kappa[k] = (d1x * d2y - d1y * d2x) / s.powi(3);
        nu[k] = Vec2::new(-d1y / s, d1x / s);
        speed[k] = s;
    }
    let area = |q: &[Vec2]| {
        0.5 * (0..n)
            .map(|i| q[i].x * q[(i + 1) % n].y - q[(i + 1) % n].x * q[i].y)
            .sum::<f64>()
    };
    let a0 = area(pts);
    let lam0 = kappa.iter().zip(&speed).map(|(k, s)| k * s).sum::<f64>() / speed.iter().sum::<f64>();
    // A(μ) = c0 + c1 μ + c2 μ² for points b_i − μ ν_i, μ = (λ − λ0) Δt.
    let b: Vec<Vec2> = (0..n)
        .map(|i| pts[i] + nu[i] * ((kappa[i] - lam0) * dt))
        .collect();
    let (mut c0, mut c1, mut c2) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let j = (i + 1) % n;
        c0 += 0.5 * b[i].cross(b[j]);
        c1 -= 0.5 * (b[i].cross(nu[j]) + nu[i].cross(b[j]));
        c2 += 0.5 * nu[i].cross(nu[j]);
    }
    let rel = (c0 - a0) / a0;
    if rel.abs() <= 1e-8 {
        return b;
    }
    let disc = (c1 * c1 - 4.0 * c2 * (c0 - a0)).sqrt();
    let roots = [(-c1 + disc) / (2.0 * c2), (-c1 - disc) / (2.0 * c2)];
    let mu = if roots[0].abs() < roots[1].abs() { roots[0] } else { roots[1] };
    (0..n).map(|i| b[i] - nu[i] * mu).collect()
}

#[test]
fn matches_independent_curvature_flow_step() {
    for (a, b, dt) in [(1.5, 1.0, 1e-4), (2.0, 0.7, 1e-3), (1.2, 1.0, 5e-3)] {
        let c = SimConfig {
            dt,
            ..cfg(0.0, 96)
        };
        let p = profile(&c);
        let curve = DiscreteCurve::ellipse(a, b, 96, Vec2::new(0.1, 0.4)).unwrap();
        let expected = reference_step(curve.points(), dt);
        let mut s = init_state(curve, &p, &c, None).unwrap();
        step(&mut s, &c, &p).unwrap();
        for (x, y) in s.curve.points().iter().zip(&expected) {
            assert!((*x - *y).norm() <= 1e-12, "{x:?} vs {y:?}");
        }
    }
}

#[test]
fn runs_are_bit_identical() {
    let mut c = cfg(50.0, 48);
    c.resample_every = 7;
    c.track_nodes = vec![0, 10];
    let p = profile(&c);
    let go = || {
        let curve = DiscreteCurve::ellipse(1.3, 1.0, 48, Vec2::ZERO).unwrap();
        let mut s = init_state(curve, &p, &c, Some(Vec2::new(0.0, 0.5))).unwrap();
        run(&mut s, &c, &p, &mut []).unwrap()
    };
    let (a, b) = (go(), go());
    assert_eq!(a, b);
    assert_eq!(a.len(), c.steps() + 1);
}

#[test]
fn zero_end_time_gives_initial_record_only() {
    let mut c = cfg(0.0, 32);
    c.t_end = 0.0;
    let p = profile(&c);
    let mut s = init_state(DiscreteCurve::circle(1.0, 32, Vec2::ZERO).unwrap(), &p, &c, None).unwrap();
    let series = run(&mut s, &c, &p, &mut []).unwrap();
    assert_eq!(series.len(), 1);
    assert_eq!(s.steps, 0);
}

#[test]
fn resampling_keeps_area_and_zero_ends() {
    let mut c = cfg(100.0, 64);
    c.resample_every = 1;
    c.t_end = 1e-4;
    let p = profile(&c);
    let curve = DiscreteCurve::ellipse(1.5, 1.0, 64, Vec2::ZERO).unwrap();
    let mut s = init_state(curve, &p, &c, Some(Vec2::new(0.0, 1.0))).unwrap();
    let series = run(&mut s, &c, &p, &mut []).unwrap();
    for r in &series {
        assert!((r.area - s.area0).abs() / s.area0 <= c.err);
    }
    for i in 0..64 {
        let col = s.actin.column(i);
        assert_eq!(col[0], 0.0);
        assert_eq!(col[col.len() - 1], 0.0);
    }
    let seg = s.curve.segment_lengths();
    let mean = seg.iter().sum::<f64>() / 64.0;
    assert!(seg.iter().all(|l| (l - mean).abs() < 1e-3 * mean));
}

#[test]
fn directory_sink_writes_expected_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = cfg(0.0, 32);
    c.t_end = 5e-5;
    c.snapshot_every = 5;
    c.track_nodes = vec![2];
    let p = profile(&c);
    let mut s = init_state(DiscreteCurve::circle(1.0, 32, Vec2::ZERO).unwrap(), &p, &c, None).unwrap();
    let mut sink = DirectorySink::new(dir.path(), &c.track_nodes).unwrap();
    let series = run(&mut s, &c, &p, &mut [&mut sink]).unwrap();
    let diag = std::fs::read_to_string(dir.path().join("diag.csv")).unwrap();
    assert_eq!(diag.lines().next().unwrap(), "t,Q,area,lambda,cx,cy,iters");
    assert_eq!(diag.lines().count(), series.len() + 1);
    let trace = std::fs::read_to_string(dir.path().join("trace_2.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "t,V,V_minus_phi");
    assert!(dir.path().join("curve_00000000.csv").exists());
    assert!(dir.path().join("curve_00000005.csv").exists());
}

#[test]
fn oversized_step_reports_area_failure() {
    let mut c = cfg(0.0, 32);
    c.max_area_iters = 1;
    c.area_damping = 0.01;
    c.dt = 0.05;
    let p = profile(&c);
    let mut s =
        init_state(DiscreteCurve::ellipse(3.0, 0.5, 32, Vec2::ZERO).unwrap(), &p, &c, None).unwrap();
    let before = s.curve.clone();
    assert!(matches!(step(&mut s, &c, &p), Err(crate::Error::AreaLoopDiverged { .. })));
    assert_eq!(s.curve, before);
}
