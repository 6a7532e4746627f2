//! Double-well potentials and the standing-wave profile connecting their wells.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::write_csv;

/// Tolerance below which a negative `2W(θ)` is treated as roundoff.
const ROUNDOFF_CLAMP: f64 = 1e-14;

/// A double-well potential with wells at 0 and 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialWell {
    /// `W(z) = ¼ z² (1 - z)²`.
    AllenCahn,
    /// `W(z) = ¼ z² (1 - z)² (1 + a z²)`.
    AsymmetricPolynomial { a: f64 },
    /// `W(z) = Σ c_k z^k` with coefficients in ascending order.
    CustomPolynomial { coeffs: Vec<f64> },
}

impl PotentialWell {
    /// The asymmetric well with `a = 150`.
    pub fn asym150() -> Self {
        PotentialWell::AsymmetricPolynomial { a: 150.0 }
    }

    pub fn value(&self, z: f64) -> f64 {
        let base = 0.25 * z * z * (1.0 - z) * (1.0 - z);
        match self {
            PotentialWell::AllenCahn => base,
            PotentialWell::AsymmetricPolynomial { a } => base * (1.0 + a * z * z),
            PotentialWell::CustomPolynomial { coeffs } => {
                coeffs.iter().rev().fold(0.0, |acc, c| acc * z + c)
            }
        }
    }

    pub fn derivative(&self, z: f64) -> f64 {
        let base = 0.25 * z * z * (1.0 - z) * (1.0 - z);
        let dbase = 0.5 * z * (1.0 - z) * (1.0 - 2.0 * z);
        match self {
            PotentialWell::AllenCahn => dbase,
            PotentialWell::AsymmetricPolynomial { a } => {
                dbase * (1.0 + a * z * z) + base * 2.0 * a * z
            }
            PotentialWell::CustomPolynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * z + k as f64 * c),
        }
    }

    /// Checks `W(0) = W(1) = 0` and `W > 0` on sampled interior points.
    pub fn validate(&self) -> Result<()> {
        if let PotentialWell::AsymmetricPolynomial { a } = self {
            if !a.is_finite() {
                return Err(Error::InvalidInput(format!("asymmetry a = {a} is not finite")));
            }
        }
        for end in [0.0, 1.0] {
            let w = self.value(end);
            if w.abs() > 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "potential must vanish at the wells: W({end}) = {w}"
                )));
            }
        }
        for k in 1..1000 {
            let z = k as f64 / 1000.0;
            let w = self.value(z);
            if !(w > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "potential must be positive between the wells: W({z}) = {w}"
                )));
            }
        }
        Ok(())
    }

    /// Short identifier used in manifests and CLI flags.
    pub fn label(&self) -> String {
        match self {
            PotentialWell::AllenCahn => "allen-cahn".into(),
            PotentialWell::AsymmetricPolynomial { a } => format!("asym{a}"),
            PotentialWell::CustomPolynomial { coeffs } => format!("poly{coeffs:?}"),
        }
    }
}

impl std::str::FromStr for PotentialWell {
    type Err = Error;

    /// Accepts `allen-cahn`, `asym150` / `asym:<a>`, or `poly:c0,c1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("allen-cahn") || s.eq_ignore_ascii_case("allencahn") {
            return Ok(PotentialWell::AllenCahn);
        }
        if let Some(rest) = s.strip_prefix("asym") {
            let rest = rest.trim_start_matches(':');
            let a: f64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad asymmetry in '{s}'")))?;
            return Ok(PotentialWell::AsymmetricPolynomial { a });
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let coeffs = rest
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::InvalidInput(format!("bad coefficients in '{s}'")))?;
            return Ok(PotentialWell::CustomPolynomial { coeffs });
        }
        Err(Error::InvalidInput(format!(
            "unknown potential '{s}' (expected allen-cahn, asym<a>, or poly:c0,c1,...)"
        )))
    }
}

/// Sampled standing wave θ₀ on the uniform grid `z_j = -L + j Δz`, `j = 0..=M`.
#[derive(Debug, Clone, PartialEq)]
pub struct StandingWaveProfile {
    well: PotentialWell,
    half_width: f64,
    intervals: usize,
    z: Vec<f64>,
    theta: Vec<f64>,
    dtheta: Vec<f64>,
    weight: Vec<f64>,
    c0: f64,
}

impl StandingWaveProfile {
    pub fn well(&self) -> &PotentialWell {
        &self.well
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Number of grid intervals `M`; there are `M + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn dz(&self) -> f64 {
        2.0 * self.half_width / self.intervals as f64
    }

    pub fn center_index(&self) -> usize {
        self.intervals / 2
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn dtheta(&self) -> &[f64] {
        &self.dtheta
    }

    /// `(θ₀′)²` at every node.
    pub fn weight(&self) -> &[f64] {
        &self.weight
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    /// Replaces the derivative samples. Used to build degenerate profiles in tests
    /// and for profiles imported from elsewhere.
    pub fn with_dtheta(mut self, dtheta: Vec<f64>) -> Result<Self> {
        if dtheta.len() != self.z.len() {
            return Err(Error::InvalidInput("dtheta length mismatch".into()));
        }
        self.weight = dtheta.iter().map(|d| d * d).collect();
        self.dtheta = dtheta;
        self.c0 = compute_c0(&self);
        Ok(self)
    }

    /// Writes columns `z, theta, dtheta`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows = (0..self.len()).map(|j| vec![self.z[j], self.theta[j], self.dtheta[j]]);
        write_csv(path, &["z", "theta", "dtheta"], rows)
    }
}

fn slope_of(well: &PotentialWell, theta: f64) -> Result<f64> {
    let two_w = 2.0 * well.value(theta);
    if two_w < 0.0 {
        if two_w > -ROUNDOFF_CLAMP {
            return Ok(0.0);
        }
        return Err(Error::DegenerateWell {
            theta,
            value: two_w,
        });
    }
    Ok(two_w.sqrt())
}

/// Integrates `θ₀′ = √(2W(θ₀))`, `θ₀(0) = ½`, outward from the center node with
/// classical RK4 at the grid spacing.
pub fn solve_standing_wave(
    well: &PotentialWell,
    half_width: f64,
    intervals: usize,
) -> Result<StandingWaveProfile> {
    if !(half_width > 0.0) || !half_width.is_finite() {
        return Err(Error::InvalidInput(format!(
            "half width must be positive, got {half_width}"
        )));
    }
    if intervals < 16 || intervals % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "grid needs an even number of intervals >= 16, got {intervals}"
        )));
    }
    well.validate()?;

    let n = intervals + 1;
    let dz = 2.0 * half_width / intervals as f64;
    let center = intervals / 2;
    let z: Vec<f64> = (0..n)
        .map(|j| (j as f64 - center as f64) * dz)
        .collect();
    let mut theta = vec![0.0; n];
    theta[center] = 0.5;

    for dir in [1.0f64, -1.0] {
        let h = dir * dz;
        let mut y = 0.5;
        for step in 1..=center {
            let k1 = slope_of(well, y)?;
            let k2 = slope_of(well, (y + 0.5 * h * k1).clamp(0.0, 1.0))?;
            let k3 = slope_of(well, (y + 0.5 * h * k2).clamp(0.0, 1.0))?;
            let k4 = slope_of(well, (y + h * k3).clamp(0.0, 1.0))?;
            y = (y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(0.0, 1.0);
            let j = if dir > 0.0 { center + step } else { center - step };
            theta[j] = y;
        }
    }

    if let Some(j) = (1..n).find(|&j| theta[j] < theta[j - 1]) {
        return Err(Error::NonMonotoneProfile(format!(
            "theta decreases between z = {} and z = {}",
            z[j - 1],
            z[j]
        )));
    }
    // A well strictly inside (0, 1) would trap the profile short of the outer wells.
    if theta[0] > 1e-2 || theta[n - 1] < 1.0 - 1e-2 {
        return Err(Error::NonMonotoneProfile(format!(
            "profile spans [{}, {}] instead of connecting 0 and 1",
            theta[0],
            theta[n - 1]
        )));
    }

    let dtheta = theta
        .iter()
        .map(|&t| slope_of(well, t))
        .collect::<Result<Vec<_>>>()?;
    let weight: Vec<f64> = dtheta.iter().map(|d| d * d).collect();
    let mut profile = StandingWaveProfile {
        well: well.clone(),
        half_width,
        intervals,
        z,
        theta,
        dtheta,
        weight,
        c0: 0.0,
    };
    profile.c0 = compute_c0(&profile);
    Ok(profile)
}

/// Trapezoidal quadrature of `(θ₀′)²` over `[-L, L]`.
pub fn compute_c0(profile: &StandingWaveProfile) -> f64 {
    let w = profile.weight();
    let n = w.len();
    let interior: f64 = w[1..n - 1].iter().sum();
    profile.dz() * (interior + 0.5 * (w[0] + w[n - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact_allen_cahn(z: f64) -> f64 {
        0.5 * ((z / (2.0 * 2f64.sqrt())).tanh() + 1.0)
    }

    #[test]
    fn allen_cahn_matches_tanh() {
        let p = solve_standing_wave(&PotentialWell::AllenCahn, 20.0, 2000).unwrap();
        let max_err = p
            .z()
            .iter()
            .zip(p.theta())
            .map(|(z, t)| (t - exact_allen_cahn(*z)).abs())
            .fold(0.0, f64::max);
        assert!(max_err <= 1e-6, "max error {max_err}");
    }

    #[test]
    fn center_node_is_exactly_half() {
        for (l, m) in [(20.0, 2000), (8.0, 16), (7.5, 300)] {
            let p = solve_standing_wave(&PotentialWell::AllenCahn, l, m).unwrap();
            assert_eq!(p.theta()[p.center_index()], 0.5);
            assert_eq!(p.z()[p.center_index()], 0.0);
        }
    }

    #[test]
    fn asymmetric_profile_matches_inverse_integral_oracle() {
        // θ₀(z) from z(θ) = ∫_{1/2}^{θ} dθ'/√(2W(θ')) evaluated at 40 digits.
        let p = solve_standing_wave(&PotentialWell::asym150(), 20.0, 2000).unwrap();
        let at = |z: f64| {
            let j = ((z + 20.0) / p.dz()).round() as usize;
            p.theta()[j]
        };
        assert!(p.theta()[0] < 1e-6);
        assert!((at(-2.0) - 0.044_586_825_474_710_64).abs() < 1e-6);
        assert_eq!(at(0.0), 0.5);
        assert!((at(2.0) - 0.999_999_923_863_726_8).abs() < 1e-6);
    }

    #[test]
    fn c0_values() {
        let ac = solve_standing_wave(&PotentialWell::AllenCahn, 20.0, 2000).unwrap();
        assert!((ac.c0() - 2f64.sqrt() / 12.0).abs() < 1e-5);
        // c₀ = ∫_0^1 √(2W(θ)) dθ evaluated at 30 digits.
        let asym = solve_standing_wave(&PotentialWell::asym150(), 20.0, 2000).unwrap();
        assert!((asym.c0() - 0.734_740_242_112_569_9).abs() < 1e-5, "{}", asym.c0());
    }

    #[test]
    fn zero_derivative_gives_zero_c0() {
        let p = solve_standing_wave(&PotentialWell::AllenCahn, 10.0, 100).unwrap();
        let n = p.len();
        let p = p.with_dtheta(vec![0.0; n]).unwrap();
        assert_eq!(p.c0(), 0.0);
    }

    #[test]
    fn profile_consistent_with_defining_ode() {
        for well in [PotentialWell::AllenCahn, PotentialWell::asym150()] {
            let p = solve_standing_wave(&well, 20.0, 800).unwrap();
            for (t, d) in p.theta().iter().zip(p.dtheta()) {
                assert!((d - (2.0 * well.value(*t)).max(0.0).sqrt()).abs() <= 1e-12);
            }
            assert!(p.theta().windows(2).all(|w| w[1] >= w[0]));
            assert!(p.c0() > 0.0);
        }
    }

    #[test]
    fn symmetric_well_profile_is_antisymmetric_about_half() {
        let p = solve_standing_wave(&PotentialWell::AllenCahn, 20.0, 2000).unwrap();
        let n = p.len();
        for j in 0..n {
            assert!((p.theta()[j] + p.theta()[n - 1 - j] - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn c0_converges_at_second_order() {
        let c: Vec<f64> = [200, 400, 800]
            .iter()
            .map(|&m| solve_standing_wave(&PotentialWell::asym150(), 20.0, m).unwrap().c0())
            .collect();
        let ratio = (c[0] - c[1]) / (c[1] - c[2]);
        assert!(ratio > 3.0 && ratio < 20.0, "ratio {ratio}, {c:?}");
    }

    #[test]
    fn misplaced_wells_are_rejected() {
        // Wells at 0 and 0.5: W = z²(0.5 - z)² is zero inside (0, 1).
        let bad = PotentialWell::CustomPolynomial {
            coeffs: vec![0.0, 0.0, 0.25, -1.0, 1.0],
        };
        assert!(solve_standing_wave(&bad, 20.0, 200).is_err());
        let err = solve_standing_wave(&PotentialWell::AllenCahn, 20.0, 15).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert!(solve_standing_wave(&PotentialWell::AllenCahn, -1.0, 100).is_err());
    }

    #[test]
    fn custom_polynomial_matches_allen_cahn() {
        // ¼z²(1-z)² = ¼z² - ½z³ + ¼z⁴
        let poly = PotentialWell::CustomPolynomial {
            coeffs: vec![0.0, 0.0, 0.25, -0.5, 0.25],
        };
        for k in 0..=20 {
            let z = k as f64 / 20.0;
            assert!((poly.value(z) - PotentialWell::AllenCahn.value(z)).abs() < 1e-15);
            assert!((poly.derivative(z) - PotentialWell::AllenCahn.derivative(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let w = PotentialWell::asym150();
        for k in 1..20 {
            let z = k as f64 / 20.0;
            let fd = (w.value(z + 1e-6) - w.value(z - 1e-6)) / 2e-6;
            assert!((fd - w.derivative(z)).abs() < 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn parses_labels() {
        assert_eq!("allen-cahn".parse::<PotentialWell>().unwrap(), PotentialWell::AllenCahn);
        assert_eq!("asym150".parse::<PotentialWell>().unwrap(), PotentialWell::asym150());
        assert_eq!(
            "asym:2.5".parse::<PotentialWell>().unwrap(),
            PotentialWell::AsymmetricPolynomial { a: 2.5 }
        );
        assert!("quartic".parse::<PotentialWell>().is_err());
    }
}
