//! Banded solvers: the Thomas algorithm and its periodic (cyclic) variant.

use crate::error::{Error, Result};

/// Solves a tridiagonal system with the Thomas algorithm.
///
/// `lower[0]` and `upper[n - 1]` are ignored. Row `i` reads
/// `lower[i] * x[i-1] + diag[i] * x[i] + upper[i] * x[i+1] = rhs[i]`.
pub fn thomas_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    if lower.len() != n || diag.len() != n || upper.len() != n {
        return Err(Error::InvalidInput(format!(
            "tridiagonal dimensions disagree: lower {}, diag {}, upper {}, rhs {}",
            lower.len(),
            diag.len(),
            upper.len(),
            n
        )));
    }
    let mut x = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    thomas_solve_into(lower, diag, upper, rhs, &mut scratch, &mut x)?;
    Ok(x)
}

/// Allocation-free Thomas solve. `scratch` and `out` must have length `rhs.len()`.
pub(crate) fn thomas_solve_into(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
    scratch: &mut [f64],
    out: &mut [f64],
) -> Result<()> {
    let n = rhs.len();
    if n == 0 {
        return Ok(());
    }
    let mut pivot = diag[0];
    if pivot == 0.0 || !pivot.is_finite() {
        return Err(Error::SingularSystem { row: 0 });
    }
    let mut inv = 1.0 / pivot;
    scratch[0] = upper[0] * inv;
    out[0] = rhs[0] * inv;
    for i in 1..n {
        pivot = diag[i] - lower[i] * scratch[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        inv = 1.0 / pivot;
        scratch[i] = if i + 1 < n { upper[i] * inv } else { 0.0 };
        out[i] = (rhs[i] - lower[i] * out[i - 1]) * inv;
    }
    for i in (0..n - 1).rev() {
        out[i] -= scratch[i] * out[i + 1];
    }
    Ok(())
}

/// Solves a periodic tridiagonal system where `lower[0]` couples row 0 to
/// `x[n-1]` and `upper[n-1]` couples row `n-1` to `x[0]` (Sherman-Morrison).
pub fn cyclic_thomas_solve(
    lower: &[f64],
    diag: &[f64],
    upper: &[f64],
    rhs: &[f64],
) -> Result<Vec<f64>> {
    let n = rhs.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "cyclic tridiagonal system needs at least 3 rows, got {n}"
        )));
    }
    if lower.len() != n || diag.len() != n || upper.len() != n {
        return Err(Error::InvalidInput(
            "cyclic tridiagonal dimensions disagree".into(),
        ));
    }
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let x = thomas_solve(lower, &d, upper, rhs)?;
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = alpha;
    let z = thomas_solve(lower, &d, upper, &u)?;

    let fact = (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    Ok(x.iter().zip(&z).map(|(xi, zi)| xi - fact * zi).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_returns_rhs() {
        let b = [3.0, -1.0, 2.5, 7.0];
        let x = thomas_solve(&[0.0; 4], &[1.0; 4], &[0.0; 4], &b).unwrap();
        assert_eq!(x, b.to_vec());
    }

    #[test]
    fn three_by_three_laplacian() {
        // [2 -1 0; -1 2 -1; 0 -1 2] x = (1, 0, 1) has x = (1, 1, 1).
        let x = thomas_solve(&[0.0, -1.0, -1.0], &[2.0; 3], &[-1.0, -1.0, 0.0], &[1.0, 0.0, 1.0])
            .unwrap();
        for xi in x {
            assert!((xi - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_is_reported() {
        let err = thomas_solve(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0], &[1.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { row: 1 }));
        let err = thomas_solve(&[0.0], &[0.0], &[0.0], &[1.0]).unwrap_err();
        assert!(matches!(err, Error::SingularSystem { row: 0 }));
    }

    #[test]
    fn mismatched_dimensions() {
        assert!(matches!(
            thomas_solve(&[0.0], &[1.0, 1.0], &[0.0, 0.0], &[1.0, 1.0]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn cyclic_matches_dense_periodic_system() {
        let n = 7;
        let lower: Vec<f64> = (0..n).map(|i| -1.0 - 0.1 * i as f64).collect();
        let upper: Vec<f64> = (0..n).map(|i| -0.5 + 0.05 * i as f64).collect();
        let diag: Vec<f64> = (0..n).map(|i| 4.0 + 0.3 * i as f64).collect();
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = cyclic_thomas_solve(&lower, &diag, &upper, &rhs).unwrap();
        for i in 0..n {
            let r = lower[i] * x[(i + n - 1) % n] + diag[i] * x[i] + upper[i] * x[(i + 1) % n];
            assert!((r - rhs[i]).abs() < 1e-13, "row {i}: {r} vs {}", rhs[i]);
        }
    }
}
