use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

const POWER_ITERATIONS: usize = 20_000;
const POWER_TOL: f64 = 1e-9;
const INVERSE_STEPS: usize = 4;
const RESIDUAL_TOL: f64 = 1e-12;

/// Perron root and eigenvector, the vector normalized to sum 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PerronData {
    pub r: f64,
    pub x: Vec<f64>,
    /// Set when the matrix has spectral radius zero.
    pub zero: bool,
}

impl PerronData {
    pub fn residual(&self, a: &DMatrix<f64>) -> f64 {
        let x = DVector::from_column_slice(&self.x);
        (a * &x - &x * self.r).amax()
    }
}

fn normalize(v: &mut DVector<f64>) -> bool {
    let sum = v.sum();
    if sum == 0.0 || !sum.is_finite() {
        return false;
    }
    *v /= sum;
    true
}

/// Perron root and vector of a non-negative irreducible matrix.
///
/// Power iteration runs on `(A + I)/2`, which has the same eigenvectors and is
/// primitive even when `A` is periodic; a few shifted inverse-iteration steps
/// then bring the residual to rounding level.
pub fn perron(a: &DMatrix<f64>) -> Result<PerronData> {
    let n = a.nrows();
    if n == 0 || a.ncols() != n {
        return Err(Error::Dimension("Perron data needs a non-empty square matrix".into()));
    }
    if let Some(v) = a.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidArgument(format!("matrix entry {v} is not non-negative")));
    }
    if n == 1 {
        let r = a[(0, 0)];
        return Ok(PerronData { r, x: vec![1.0], zero: r == 0.0 });
    }

    let shifted = (a + DMatrix::<f64>::identity(n, n)) * 0.5;
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..POWER_ITERATIONS {
        let mut next = &shifted * &x;
        if !normalize(&mut next) {
            return Err(Error::PerronFailure("power iteration collapsed".into()));
        }
        let change = (&next - &x).amax();
        x = next;
        if change < POWER_TOL {
            break;
        }
    }
    let mut r = (a * &x).sum();
    if r <= 0.0 {
        return Ok(PerronData { r: 0.0, x: x.iter().copied().collect(), zero: true });
    }

    for _ in 0..INVERSE_STEPS {
        let sigma = r * (1.0 + 1e-10) + 1e-300;
        let shifted = a - DMatrix::<f64>::identity(n, n) * sigma;
        let Some(mut y) = shifted.lu().solve(&x) else { break };
        if !normalize(&mut y) || y.iter().any(|v| !v.is_finite()) {
            break;
        }
        let r_new = (a * &y).sum();
        let better = (a * &y - &y * r_new).amax() <= (a * &x - &x * r).amax();
        if !better {
            break;
        }
        x = y;
        r = r_new;
    }

    let data = PerronData { r, x: x.iter().copied().collect(), zero: false };
    let residual = data.residual(a);
    if residual >= RESIDUAL_TOL * (1.0 + r) {
        return Err(Error::PerronFailure(format!("residual {residual:e} after iteration")));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn swap_matrix() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let p = perron(&a).unwrap();
        assert_abs_diff_eq!(p.r, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p.x[0], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(p.x[1], 0.5, epsilon = 1e-14);
    }

    #[test]
    fn rank_one() {
        let a = DMatrix::from_element(2, 2, 0.1);
        let p = perron(&a).unwrap();
        assert_abs_diff_eq!(p.r, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(p.x[0], 0.5, epsilon = 1e-15);
        assert!(p.residual(&a) < 1e-15);
    }

    #[test]
    fn scalar_cases() {
        let p = perron(&DMatrix::from_element(1, 1, 0.5)).unwrap();
        assert_eq!((p.r, p.x.clone(), p.zero), (0.5, vec![1.0], false));
        let p = perron(&DMatrix::from_element(1, 1, 0.0)).unwrap();
        assert_eq!((p.r, p.x.clone(), p.zero), (0.0, vec![1.0], true));
    }

    #[test]
    fn periodic_three_cycle() {
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 0.3, 0.0, 0.0, 0.0, 0.6, 0.9, 0.0, 0.0]);
        let p = perron(&a).unwrap();
        assert_abs_diff_eq!(p.r, (0.3f64 * 0.6 * 0.9).cbrt(), epsilon = 1e-13);
        assert!(p.x.iter().all(|&v| v > 0.0));
        assert!(p.residual(&a) < 1e-13);
    }

    #[test]
    fn rejects_negative() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!(perron(&a).is_err());
    }
}
