//! Characteristic polynomials and their roots.
//!
//! Coefficients are stored monic, highest degree first: `[1, c1, …, cn]`
//! represents `λⁿ + c1·λⁿ⁻¹ + … + cn`.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of simultaneous-iteration sweeps.
pub const MAX_SWEEPS: usize = 500;

/// Residual a root must reach, relative to the coefficient magnitude bound.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Angular offset of the initial root circle.
const SEED_ANGLE: f64 = 0.4;

/// Radius (relative to `max(1, |z|)`) within which nearby roots are examined
/// as a possible multiple root.
const CLUSTER_RADIUS: f64 = 2e-3;

/// A cluster is treated as one multiple root when its members' Newton
/// corrections are at least this fraction of the cluster spread.
const UNRESOLVED_RATIO: f64 = 0.05;

/// Characteristic polynomial `det(λI − A)` by the Faddeev–LeVerrier recurrence.
pub fn faddeev_leverrier(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let identity = DMatrix::<f64>::identity(n, n);
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &identity * coeffs[k - 1];
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

pub fn eval(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `Σ |c_i|·|z|^(deg−i)`, the scale of rounding error when evaluating at `z`.
pub fn magnitude_bound(coeffs: &[f64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().fold(0.0, |acc, &c| acc * r + c.abs())
}

/// Residual `|p(z)|` relative to [`magnitude_bound`].
pub fn relative_residual(coeffs: &[f64], z: Complex64) -> f64 {
    let bound = magnitude_bound(coeffs, z);
    if bound == 0.0 {
        0.0
    } else {
        eval(coeffs, z).norm() / bound
    }
}

pub fn derivative(coeffs: &[f64]) -> Vec<f64> {
    let deg = coeffs.len().saturating_sub(1);
    coeffs[..deg]
        .iter()
        .enumerate()
        .map(|(i, &c)| c * (deg - i) as f64)
        .collect()
}

/// Synthetic division by `(λ − root)`; returns the quotient and the remainder.
pub fn deflate(coeffs: &[f64], root: f64) -> (Vec<f64>, f64) {
    let mut quotient = Vec::with_capacity(coeffs.len().saturating_sub(1));
    let mut acc = 0.0;
    for (i, &c) in coeffs.iter().enumerate() {
        acc = acc * root + c;
        if i + 1 < coeffs.len() {
            quotient.push(acc);
        }
    }
    (quotient, acc)
}

/// True when `root` is a root of `coeffs` up to evaluation rounding.
pub fn is_numerical_root(coeffs: &[f64], root: f64) -> bool {
    let z = Complex64::new(root, 0.0);
    eval(coeffs, z).norm() <= 64.0 * f64::EPSILON * magnitude_bound(coeffs, z)
}

/// All roots of a monic real polynomial, with multiplicity.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let mut poly = coeffs.to_vec();
    let mut out = Vec::with_capacity(poly.len().saturating_sub(1));

    // exact (or rounding-level) zero roots
    while poly.len() > 1 {
        let last = *poly.last().unwrap();
        let scale = poly.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if last == 0.0 || last.abs() <= f64::EPSILON * scale {
            poly.pop();
            out.push(Complex64::new(0.0, 0.0));
        } else {
            break;
        }
    }

    match poly.len() {
        1 => return Ok(out),
        2 => {
            out.push(Complex64::new(-poly[1], 0.0));
            return Ok(out);
        }
        _ => {}
    }

    let mut z = durand_kerner(&poly)?;
    let merged = refine_clusters(&poly, &mut z);
    for (zi, is_merged) in z.iter_mut().zip(&merged) {
        if !is_merged {
            *zi = newton_polish(&poly, *zi);
        }
    }
    out.extend(z);
    Ok(out)
}

/// Weierstrass / Durand–Kerner simultaneous iteration.
pub fn durand_kerner(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let radius = coeffs[1..].iter().fold(0.0f64, |m, c| m.max(c.abs())) + 1.0;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / deg as f64 + SEED_ANGLE))
        .collect();

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut max_step = 0.0f64;
        let mut max_residual = 0.0f64;
        for i in 0..deg {
            let p = eval(coeffs, z[i]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // coincident estimates: nudge apart
                let scale = 1.0 + z[i].norm();
                z[i] += Complex64::new(f64::EPSILON.sqrt(), f64::EPSILON.sqrt()) * scale;
                max_step = f64::INFINITY;
                continue;
            }
            let step = p / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
            max_residual = max_residual.max(relative_residual(coeffs, z[i]));
        }
        if max_step <= 4.0 * f64::EPSILON || max_residual <= 8.0 * f64::EPSILON {
            break;
        }
    }

    let residual = z.iter().map(|&zi| relative_residual(coeffs, zi)).fold(0.0, f64::max);
    if !(residual < RESIDUAL_TOL) {
        return Err(Error::Convergence { sweeps, residual });
    }
    Ok(z)
}

/// Newton iteration kept only while it lowers the residual.
pub fn newton_polish(coeffs: &[f64], mut z: Complex64) -> Complex64 {
    let dcoeffs = derivative(coeffs);
    let mut best = eval(coeffs, z).norm();
    for _ in 0..8 {
        if best == 0.0 {
            break;
        }
        let dp = eval(&dcoeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let candidate = z - eval(coeffs, z) / dp;
        let res = eval(coeffs, candidate).norm();
        if res < best {
            z = candidate;
            best = res;
        } else {
            break;
        }
    }
    z
}

/// Groups estimates that sit within [`CLUSTER_RADIUS`] of each other. A group
/// whose members are not individually resolved is replaced by a single
/// multiple root, located as the simple root of the `(m−1)`-th derivative.
/// Returns which estimates were merged.
fn refine_clusters(coeffs: &[f64], z: &mut [Complex64]) -> Vec<bool> {
    let deg = z.len();
    let mut group: Vec<usize> = (0..deg).collect();
    fn find(group: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while group[r] != r {
            r = group[r];
        }
        group[i] = r;
        r
    }
    for i in 0..deg {
        for j in i + 1..deg {
            let scale = 1.0f64.max(z[i].norm()).max(z[j].norm());
            if (z[i] - z[j]).norm() <= CLUSTER_RADIUS * scale {
                let (ri, rj) = (find(&mut group, i), find(&mut group, j));
                if ri != rj {
                    group[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let dcoeffs = derivative(coeffs);
    let mut merged = vec![false; deg];
    for root in 0..deg {
        let members: Vec<usize> = (0..deg).filter(|&i| find(&mut group, i) == root).collect();
        let m = members.len();
        if m < 2 {
            continue;
        }
        let mean = members.iter().map(|&i| z[i]).sum::<Complex64>() / m as f64;
        let spread = members.iter().map(|&i| (z[i] - mean).norm()).fold(0.0, f64::max);
        let unresolved = members.iter().any(|&i| {
            let dp = eval(&dcoeffs, z[i]);
            dp.norm() == 0.0 || (eval(coeffs, z[i]) / dp).norm() >= UNRESOLVED_RATIO * spread
        });
        if !unresolved {
            continue;
        }

        let mut high = coeffs.to_vec();
        for _ in 0..m - 1 {
            high = derivative(&high);
        }
        let mut c = newton_polish(&high, mean);
        if (c - mean).norm() > 2.0 * spread + 4.0 * f64::EPSILON * (1.0 + mean.norm()) {
            c = mean;
        }
        if c.im.abs() <= spread {
            c.im = 0.0;
        }
        for &i in &members {
            z[i] = c;
            merged[i] = true;
        }
    }
    merged
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn charpoly_of_small_matrices() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(faddeev_leverrier(&a), vec![1.0, -5.0, -2.0]);
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(faddeev_leverrier(&id), vec![1.0, -3.0, 3.0, -1.0]);
    }

    #[test]
    fn synthetic_division() {
        let (q, r) = deflate(&[1.0, -3.0, 3.0, -1.0], 1.0);
        assert_eq!(q, vec![1.0, -2.0, 1.0]);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn simple_roots() {
        // (x − 1)(x + 2)(x − 0.5)
        let r = roots(&[1.0, 0.5, -2.5, 1.0]).unwrap();
        let mut re: Vec<f64> = r.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(re[0], -2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(re[1], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(re[2], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn complex_pair() {
        // x² + 1
        let r = roots(&[1.0, 0.0, 1.0]).unwrap();
        let mut im: Vec<f64> = r.iter().map(|z| z.im).collect();
        im.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(im[0], -1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(im[1], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn double_root_is_recovered_exactly() {
        // (x − 0.3)²
        let r = roots(&[1.0, -0.6, 0.09]).unwrap();
        for z in r {
            assert_abs_diff_eq!(z.re, 0.3, epsilon = 1e-14);
            assert_eq!(z.im, 0.0);
        }
    }

    #[test]
    fn triple_root() {
        // (x − 0.5)³ (x + 0.25)
        let c = [1.0, -1.25, 0.375, 0.0625, -0.03125];
        let r = roots(&c).unwrap();
        let near: Vec<_> = r.iter().filter(|z| (z.re - 0.5).abs() < 1e-3).collect();
        assert_eq!(near.len(), 3);
        for z in near {
            assert_abs_diff_eq!(z.re, 0.5, epsilon = 1e-12);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_roots_are_stripped() {
        let r = roots(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(r.iter().all(|z| z.norm() == 0.0));
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn close_distinct_roots_stay_distinct() {
        // (x − 0.3)(x − 0.3001)
        let c = [1.0, -0.6001, 0.3 * 0.3001];
        let mut r: Vec<f64> = roots(&c).unwrap().iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(r[0], 0.3, epsilon = 1e-11);
        assert_abs_diff_eq!(r[1], 0.3001, epsilon = 1e-11);
    }
}
