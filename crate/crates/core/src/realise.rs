//! Explicit monotone matrices with prescribed nontrivial eigenvalues.

use std::fmt;
use std::str::FromStr;

use crate::dominance::{check_liftable, dominance_of, lift, DominanceMatrix, Liftability};
use crate::error::{Error, Result};
use crate::matrix::{convex_combine_monotone, MonotoneMatrix, DEFAULT_TOL};
use crate::regions::{xi3_boundary, xi3_pair_member, xi_n_member, Curve};
use crate::spectra::{eigenpair_3x3, EigenPair};

/// Slack allowed when checking a family parameter against its range.
const ALPHA_TOL: f64 = 1e-12;

/// Agreement required between a boundary family and the boundary formula.
const BOUNDARY_TOL: f64 = 1e-9;

/// A one-parameter family of 3×3 monotone matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Covers `λ₂ = 1 − α ∈ [0, 1]`.
    Type1,
    /// Covers `λ = ±√(1/4 − α²)`, in particular `[−1/2, 0]`.
    Type2,
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Family {
    pub const ALL: [Family; 7] =
        [Family::Type1, Family::Type2, Family::C1, Family::C2, Family::C3, Family::C4, Family::C5];

    pub fn name(self) -> &'static str {
        match self {
            Family::Type1 => "type1",
            Family::Type2 => "type2",
            Family::C1 => "C1",
            Family::C2 => "C2",
            Family::C3 => "C3",
            Family::C4 => "C4",
            Family::C5 => "C5",
        }
    }

    /// Closed parameter range `[lo, hi]`.
    pub fn alpha_range(self) -> (f64, f64) {
        match self {
            Family::Type1 | Family::C1 | Family::C3 => (0.0, 1.0),
            Family::Type2 | Family::C2 | Family::C4 | Family::C5 => (0.0, 0.5),
        }
    }

    pub fn curve(self) -> Option<Curve> {
        match self {
            Family::C1 => Some(Curve::C1),
            Family::C2 => Some(Curve::C2),
            Family::C3 => Some(Curve::C3),
            Family::C4 => Some(Curve::C4),
            Family::C5 => Some(Curve::C5),
            Family::Type1 | Family::Type2 => None,
        }
    }

    pub fn of_curve(curve: Curve) -> Family {
        match curve {
            Curve::C1 => Family::C1,
            Curve::C2 => Family::C2,
            Curve::C3 => Family::C3,
            Curve::C4 => Family::C4,
            Curve::C5 => Family::C5,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{s}`")))
    }
}

/// A family together with its parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FamilyId {
    pub family: Family,
    pub alpha: f64,
}

impl FamilyId {
    pub fn new(family: Family, alpha: f64) -> Result<Self> {
        let (lo, hi) = family.alpha_range();
        if !(alpha >= lo - ALPHA_TOL && alpha <= hi + ALPHA_TOL) {
            return Err(Error::AlphaOutOfRange { family: family.name().into(), alpha });
        }
        Ok(Self { family, alpha: alpha.clamp(lo, hi) })
    }
}

/// Builds the matrix of a realising family.
pub fn family_matrix(id: FamilyId) -> Result<MonotoneMatrix> {
    let FamilyId { family, alpha: a } = FamilyId::new(id.family, id.alpha)?;
    let rows: [[f64; 3]; 3] = match family {
        Family::Type1 => [[0.0, 1.0 - a, a], [0.0, 1.0 - a, a], [0.0, 0.0, 1.0]],
        Family::Type2 => [
            [0.5 - a, 0.5 + a, 0.0],
            [0.5 - a, 0.0, 0.5 + a],
            [0.0, 0.5 - a, 0.5 + a],
        ],
        Family::C1 => {
            let (diag, off) = ((1.0 + 2.0 * a) / 3.0, (1.0 - a) / 3.0);
            [[diag, off, off], [off, diag, off], [off, off, diag]]
        }
        Family::C2 => [[a, 1.0 - a, 0.0], [a, 1.0 - 2.0 * a, a], [0.0, 1.0 - a, a]],
        Family::C3 => [[a, 1.0 - a, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        Family::C4 => [[1.0 - a, a, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]],
        Family::C5 => [[1.0 - a, a, 0.0], [1.0 - a, 0.0, a], [0.0, 0.0, 1.0]],
    };
    MonotoneMatrix::new(&rows.map(|r| r.to_vec()), DEFAULT_TOL)
}

/// A matrix with all rows equal to `v`: its dominance matrix vanishes and its
/// spectrum is `{1, 0, …, 0}`.
pub fn equal_rows_matrix(v: &[f64]) -> Result<MonotoneMatrix> {
    if v.is_empty() {
        return Err(Error::InvalidVector("empty vector".into()));
    }
    let rows = vec![v.to_vec(); v.len()];
    MonotoneMatrix::new(&rows, DEFAULT_TOL).map_err(|e| Error::InvalidVector(e.to_string()))
}

/// A 3×3 monotone matrix with `lambda` among its eigenvalues.
pub fn realise_eigenvalue(lambda: f64) -> Result<(FamilyId, MonotoneMatrix)> {
    let verdict = xi_n_member(lambda, 3, DEFAULT_TOL)?;
    if !verdict.member {
        return Err(Error::OutOfRegion(format!(
            "{lambda} is not an eigenvalue of any 3×3 monotone matrix ({})",
            verdict.violated.unwrap_or_default()
        )));
    }
    let lambda = lambda.clamp(-0.5, 1.0);
    let id = if lambda >= 0.0 {
        FamilyId::new(Family::Type1, 1.0 - lambda)?
    } else {
        FamilyId::new(Family::Type2, (0.25 - lambda * lambda).max(0.0).sqrt())?
    };
    Ok((id, family_matrix(id)?))
}

/// Recovers the family parameter of a pair lying on one of the boundary curves.
pub fn family_parameter_inverse(curve: Curve, p: EigenPair, tol: f64) -> Result<f64> {
    let residual = curve.residual(p);
    if residual.abs() > tol {
        return Err(Error::NotOnCurve { curve: curve.name().into(), residual });
    }
    let alpha = match curve {
        Curve::C1 | Curve::C2 => p.lambda2,
        Curve::C3 => p.lambda3,
        Curve::C4 => 0.5 - (p.lambda2 + p.lambda3),
        Curve::C5 => 1.0 - (p.lambda2 + p.lambda3),
    };
    let (lo, hi) = Family::of_curve(curve).alpha_range();
    if alpha < lo - tol || alpha > hi + tol {
        return Err(Error::NotOnCurve { curve: curve.name().into(), residual: alpha });
    }
    Ok(alpha.clamp(lo, hi))
}

/// A 3×3 monotone matrix whose nontrivial eigenvalues are exactly the pair `p`.
///
/// Pairs with `λ₃ ≥ 0` come from lifting `diag(λ₂, λ₃)`; pairs with `λ₃ < 0`
/// are reached by following the ray through `p` out to the boundary, building
/// the boundary family matrix there and shrinking its dominance matrix by
/// mixing with an equal-rows matrix.
pub fn realise_pair(p: EigenPair, tol: f64) -> Result<MonotoneMatrix> {
    let verdict = xi3_pair_member(p, tol);
    if !verdict.member {
        return Err(Error::OutOfRegion(format!(
            "({}, {}) violates {}",
            p.lambda2,
            p.lambda3,
            verdict.violated.unwrap_or_default()
        )));
    }
    let center = equal_rows_matrix(&[0.0, 1.0, 0.0])?;
    if p.lambda2 <= 0.0 && p.lambda3 >= -tol {
        return Ok(center);
    }

    if p.lambda3 >= 0.0 {
        let lambda2 = p.lambda2.min(1.0);
        let d = DominanceMatrix::new(&[vec![lambda2, 0.0], vec![0.0, p.lambda3.min(lambda2)]], tol)?;
        return match check_liftable(&d, tol.max(DEFAULT_TOL))? {
            Liftability::Feasible(w) => lift(&d, w, tol.max(DEFAULT_TOL)),
            Liftability::Infeasible { bound, .. } => {
                Err(Error::InternalBoundaryMismatch(format!("diagonal lift infeasible at {bound}")))
            }
        };
    }

    let k = (p.lambda3 / p.lambda2).clamp(-1.0, 0.0);
    let (boundary, curve) = xi3_boundary(k)?;
    let alpha = family_parameter_inverse(curve, boundary, BOUNDARY_TOL)?;
    let edge = family_matrix(FamilyId::new(Family::of_curve(curve), alpha)?)?;
    let realised = eigenpair_3x3(&dominance_of(&edge)?)?;
    let mismatch = (realised.lambda2 - boundary.lambda2)
        .abs()
        .max((realised.lambda3 - boundary.lambda3).abs());
    if mismatch > BOUNDARY_TOL {
        return Err(Error::InternalBoundaryMismatch(format!(
            "{curve} family at alpha = {alpha} realises ({}, {}), boundary is ({}, {})",
            realised.lambda2, realised.lambda3, boundary.lambda2, boundary.lambda3
        )));
    }
    let t = (p.lambda2 / boundary.lambda2).clamp(0.0, 1.0);
    convex_combine_monotone(&edge, &center, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::phi_bound;
    use crate::spectra::spectrum_of_stochastic;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn pair_of(m: &MonotoneMatrix) -> EigenPair {
        eigenpair_3x3(&dominance_of(m).unwrap()).unwrap()
    }

    #[test]
    fn type1_quarter() {
        let m = family_matrix(FamilyId::new(Family::Type1, 0.25).unwrap()).unwrap();
        let p = pair_of(&m);
        assert_abs_diff_eq!(p.lambda2, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(p.lambda3, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn c1_at_one_is_identity() {
        let m = family_matrix(FamilyId::new(Family::C1, 1.0).unwrap()).unwrap();
        assert_eq!(m.rows(), vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn c4_at_zero() {
        let m = family_matrix(FamilyId::new(Family::C4, 0.0).unwrap()).unwrap();
        let d = dominance_of(&m).unwrap();
        assert_eq!(d.rows(), vec![vec![0.5, 0.5], vec![0.5, 0.0]]);
        let p = pair_of(&m);
        assert_abs_diff_eq!(p.lambda2, phi_bound(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.lambda3, -1.0 / (1.0 + 5f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(p.lambda2 * p.lambda3, -0.25, epsilon = 1e-15);
    }

    #[test]
    fn alpha_range_enforced() {
        assert!(matches!(FamilyId::new(Family::C4, 0.7), Err(Error::AlphaOutOfRange { .. })));
        assert!(FamilyId::new(Family::C3, 1.0 + 1e-14).is_ok());
        assert!(FamilyId::new(Family::Type1, f64::NAN).is_err());
    }

    #[test]
    fn realise_eigenvalue_examples() {
        let (id, _) = realise_eigenvalue(0.3).unwrap();
        assert_eq!(id.family, Family::Type1);
        assert_abs_diff_eq!(id.alpha, 0.7, epsilon = 1e-15);

        let (id, m) = realise_eigenvalue(0.0).unwrap();
        assert_eq!((id.family, id.alpha), (Family::Type1, 1.0));
        assert_eq!(m.rows(), vec![vec![0.0, 0.0, 1.0]; 3]);

        let (id, m) = realise_eigenvalue(-0.5).unwrap();
        assert_eq!((id.family, id.alpha), (Family::Type2, 0.0));
        let p = pair_of(&m);
        assert_eq!((p.lambda2, p.lambda3), (0.5, -0.5));

        assert!(matches!(realise_eigenvalue(-0.6), Err(Error::OutOfRegion(_))));
    }

    #[test]
    fn equal_rows() {
        let m = equal_rows_matrix(&[0.0, 1.0, 0.0]).unwrap();
        let s = spectrum_of_stochastic(m.as_stochastic()).unwrap();
        assert_eq!(s.values(), &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]);
        let third = 1.0 / 3.0;
        let m = equal_rows_matrix(&[third, third, third]).unwrap();
        assert!(dominance_of(&m).unwrap().entries().iter().all(|&v| v == 0.0));
        assert!(matches!(equal_rows_matrix(&[0.5, 0.6]), Err(Error::InvalidVector(_))));
    }

    #[test]
    fn parameter_inverse_examples() {
        let a = family_parameter_inverse(Curve::C2, EigenPair { lambda2: 0.3, lambda3: -0.3 }, 1e-12).unwrap();
        assert_eq!(a, 0.3);
        let p = EigenPair { lambda2: phi_bound(), lambda3: -1.0 / (1.0 + 5f64.sqrt()) };
        assert_abs_diff_eq!(family_parameter_inverse(Curve::C4, p, 1e-12).unwrap(), 0.0, epsilon = 1e-15);
        let a = family_parameter_inverse(Curve::C5, EigenPair { lambda2: 1.0, lambda3: 0.0 }, 1e-12).unwrap();
        assert_eq!(a, 0.0);
        assert!(matches!(
            family_parameter_inverse(Curve::C4, EigenPair { lambda2: 0.5, lambda3: 0.0 }, 1e-12),
            Err(Error::NotOnCurve { .. })
        ));
    }

    #[test]
    fn realise_pair_examples() {
        let m = realise_pair(EigenPair { lambda2: 0.5, lambda3: 0.25 }, 1e-12).unwrap();
        assert_eq!(m.get(0, 0), 0.5);
        let p = pair_of(&m);
        assert_abs_diff_eq!(p.lambda2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.lambda3, 0.25, epsilon = 1e-15);

        let m = realise_pair(EigenPair { lambda2: 0.0, lambda3: 0.0 }, 1e-12).unwrap();
        assert_eq!(m.rows(), vec![vec![0.0, 1.0, 0.0]; 3]);

        let m = realise_pair(EigenPair { lambda2: 0.25, lambda3: -0.25 }, 1e-12).unwrap();
        let s = spectrum_of_stochastic(m.as_stochastic()).unwrap();
        let expected = crate::spectra::Spectrum::new(
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.25, 0.0), Complex64::new(-0.25, 0.0)],
            true,
        );
        assert!(s.distance(&expected) < 1e-12);

        assert!(matches!(
            realise_pair(EigenPair { lambda2: 1.0, lambda3: -0.5 }, 1e-12),
            Err(Error::OutOfRegion(_))
        ));
    }
}
