//! Membership predicates for the monotone eigenvalue regions and the
//! stochastic reference regions they are compared against.
//!
//! Every predicate is a conjunction of named inequalities. A verdict's margin
//! is the minimum slack over the active inequalities, so it is zero on the
//! boundary and negative outside; it is not a Euclidean distance.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectra::EigenPair;

/// `(1 + √5)/4`, the value of `λ₂` where the hyperbola bound hands over to the
/// trace–determinant bound.
pub fn phi_bound() -> f64 {
    (1.0 + 5f64.sqrt()) / 4.0
}

/// `(3 − √5)/2`, minus the ray slope through the junction of C4 and C5.
pub fn junction_slope() -> f64 {
    (3.0 - 5f64.sqrt()) / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub member: bool,
    pub margin: f64,
    pub violated: Option<String>,
}

impl RegionVerdict {
    /// Builds a verdict from `(name, slack)` pairs; the first constraint in
    /// order whose slack is below `-tol` is reported as violated.
    pub fn from_slacks(slacks: &[(&str, f64)], tol: f64) -> Self {
        let margin = slacks.iter().map(|(_, s)| *s).fold(f64::INFINITY, f64::min);
        let violated = slacks.iter().find(|(_, s)| *s < -tol || s.is_nan()).map(|(n, _)| n.to_string());
        Self { member: violated.is_none(), margin, violated }
    }
}

impl fmt::Display for RegionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violated {
            None => write!(f, "member, margin {:e}", self.margin),
            Some(name) => write!(f, "not member, violated {name}, margin {:e}", self.margin),
        }
    }
}

/// Curves bounding the pair region of 3×3 monotone matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Curve {
    C1,
    C2,
    C3,
    C4,
    C5,
}

impl Curve {
    pub const ALL: [Curve; 5] = [Curve::C1, Curve::C2, Curve::C3, Curve::C4, Curve::C5];

    pub fn name(self) -> &'static str {
        match self {
            Curve::C1 => "C1",
            Curve::C2 => "C2",
            Curve::C3 => "C3",
            Curve::C4 => "C4",
            Curve::C5 => "C5",
        }
    }

    /// Residual of the curve equation at `p` (zero on the curve).
    pub fn residual(self, p: EigenPair) -> f64 {
        let (x, y) = (p.lambda2, p.lambda3);
        match self {
            Curve::C1 => x - y,
            Curve::C2 => x + y,
            Curve::C3 => x - 1.0,
            Curve::C4 => x * y + 0.25,
            Curve::C5 => x * x + x * y + y * y - x - y,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Curve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Curve::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown curve `{s}`")))
    }
}

/// Membership of a single real eigenvalue in the monotone region for n ∈ {1, 2, 3}.
pub fn xi_n_member(lambda: f64, n: usize, tol: f64) -> Result<RegionVerdict> {
    let verdict = match n {
        1 => RegionVerdict::from_slacks(&[("equals 1", -(lambda - 1.0).abs())], tol),
        2 => RegionVerdict::from_slacks(&[("lower bound 0", lambda), ("upper bound 1", 1.0 - lambda)], tol),
        3 => RegionVerdict::from_slacks(
            &[("lower bound -1/2", lambda + 0.5), ("upper bound 1", 1.0 - lambda)],
            tol,
        ),
        _ => return Err(Error::UnsupportedN(n)),
    };
    Ok(verdict)
}

/// Membership of a nontrivial eigenvalue pair in the region of 3×3 monotone matrices.
pub fn xi3_pair_member(p: EigenPair, tol: f64) -> RegionVerdict {
    let (x, y) = (p.lambda2, p.lambda3);
    let mut slacks = vec![("C1", x - y), ("C2", x + y), ("C3", 1.0 - x), ("C4", x * y + 0.25)];
    if y <= tol && x >= phi_bound() - tol {
        slacks.push(("C5", -(x * x + x * y + y * y - x - y)));
    }
    RegionVerdict::from_slacks(&slacks, tol)
}

/// The boundary point of the pair region on the ray `{(s, k·s) : s > 0}`.
pub fn xi3_boundary(k: f64) -> Result<(EigenPair, Curve)> {
    if !(-1.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("ray slope {k} outside [-1, 1]")));
    }
    if k >= 0.0 {
        return Ok((EigenPair { lambda2: 1.0, lambda3: k }, Curve::C3));
    }
    if -k >= junction_slope() {
        let s = if k == -1.0 { 0.5 } else { 1.0 / (2.0 * (-k).sqrt()) };
        Ok((EigenPair { lambda2: s, lambda3: k * s }, Curve::C4))
    } else {
        let s = (1.0 + k) / (1.0 + k + k * k);
        Ok((EigenPair { lambda2: s, lambda3: k * s }, Curve::C5))
    }
}

fn triangle_vertices() -> [Complex64; 3] {
    [
        Complex64::new(1.0, 0.0),
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0),
        Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 3.0),
    ]
}

/// Minimum signed distance from `z` to the edges of the counter-clockwise
/// triangle through the cube roots of unity (positive inside).
fn triangle_margin(z: Complex64) -> f64 {
    let v = triangle_vertices();
    (0..3)
        .map(|k| {
            let (a, b) = (v[k], v[(k + 1) % 3]);
            let edge = b - a;
            let rel = z - a;
            (edge.re * rel.im - edge.im * rel.re) / edge.norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Membership in the eigenvalue region of n×n stochastic matrices, n ∈ {2, 3}.
pub fn theta_member(z: Complex64, n: usize, tol: f64) -> Result<RegionVerdict> {
    match n {
        2 => Ok(RegionVerdict::from_slacks(
            &[("real", -z.im.abs()), ("lower bound -1", z.re + 1.0), ("upper bound 1", 1.0 - z.re)],
            tol,
        )),
        3 => {
            let segment = (z.re + 1.0).min(0.5 - z.re).min(-z.im.abs());
            let triangle = triangle_margin(z);
            let margin = segment.max(triangle);
            let member = margin >= -tol;
            Ok(RegionVerdict {
                member,
                margin,
                violated: (!member).then(|| "segment [-1,1/2] and triangle".to_string()),
            })
        }
        _ => Err(Error::UnsupportedN(n)),
    }
}

/// Real eigenvalue pairs of 3×3 stochastic matrices: `−1 ≤ λ₃ ≤ λ₂ ≤ 1` and `1 + λ₂ + λ₃ ≥ 0`.
pub fn stochastic3_real_pair_member(p: EigenPair, tol: f64) -> RegionVerdict {
    let (x, y) = (p.lambda2, p.lambda3);
    RegionVerdict::from_slacks(
        &[("lambda3>=-1", y + 1.0), ("lambda3<=lambda2", x - y), ("lambda2<=1", 1.0 - x), ("trace>=0", 1.0 + x + y)],
        tol,
    )
}

/// Region names accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionName {
    Xi1,
    Xi2,
    Xi3,
    Xi3Pair,
    Theta2,
    Theta3,
    S3RealPair,
}

impl RegionName {
    pub const ALL: [RegionName; 7] = [
        RegionName::Xi1,
        RegionName::Xi2,
        RegionName::Xi3,
        RegionName::Xi3Pair,
        RegionName::Theta2,
        RegionName::Theta3,
        RegionName::S3RealPair,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionName::Xi1 => "xi1",
            RegionName::Xi2 => "xi2",
            RegionName::Xi3 => "xi3",
            RegionName::Xi3Pair => "xi3pair",
            RegionName::Theta2 => "theta2",
            RegionName::Theta3 => "theta3",
            RegionName::S3RealPair => "s3realpair",
        }
    }

    /// Evaluates the region at a point given as one or two coordinates. For
    /// the pair regions the coordinates are `(λ₂, λ₃)` as given; for
    /// the Θ regions they are real and imaginary part.
    pub fn evaluate(self, coords: &[f64], tol: f64) -> Result<RegionVerdict> {
        let first = *coords
            .first()
            .ok_or_else(|| Error::InvalidArgument("point needs at least one coordinate".into()))?;
        let second = coords.get(1).copied();
        if coords.len() > 2 {
            return Err(Error::InvalidArgument("point has more than two coordinates".into()));
        }
        let pair = || {
            second
                .map(|y| EigenPair { lambda2: first, lambda3: y })
                .ok_or_else(|| Error::InvalidArgument("pair regions need a point `l2,l3`".into()))
        };
        let real = || {
            if second.is_some_and(|y| y != 0.0) {
                Err(Error::InvalidArgument("interval regions take a single real coordinate".into()))
            } else {
                Ok(first)
            }
        };
        match self {
            RegionName::Xi1 => xi_n_member(real()?, 1, tol),
            RegionName::Xi2 => xi_n_member(real()?, 2, tol),
            RegionName::Xi3 => xi_n_member(real()?, 3, tol),
            RegionName::Xi3Pair => Ok(xi3_pair_member(pair()?, tol)),
            RegionName::S3RealPair => Ok(stochastic3_real_pair_member(pair()?, tol)),
            RegionName::Theta2 => theta_member(Complex64::new(first, second.unwrap_or(0.0)), 2, tol),
            RegionName::Theta3 => theta_member(Complex64::new(first, second.unwrap_or(0.0)), 3, tol),
        }
    }
}

impl FromStr for RegionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionName::ALL
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown region `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const TOL: f64 = 1e-12;

    fn pair(x: f64, y: f64) -> EigenPair {
        EigenPair { lambda2: x, lambda3: y }
    }

    #[test]
    fn interval_regions() {
        assert!(xi_n_member(1.0, 1, TOL).unwrap().member);
        assert!(!xi_n_member(0.5, 1, TOL).unwrap().member);

        let v = xi_n_member(-0.5, 3, TOL).unwrap();
        assert!(v.member);
        assert_eq!(v.margin, 0.0);

        let v = xi_n_member(-0.5, 2, TOL).unwrap();
        assert!(!v.member);
        assert_eq!(v.violated.as_deref(), Some("lower bound 0"));
        assert!(matches!(xi_n_member(0.0, 4, TOL), Err(Error::UnsupportedN(4))));
    }

    #[test]
    fn impossible_pair_violates_c4() {
        let v = xi3_pair_member(pair(1.0, -0.5), TOL);
        assert!(!v.member);
        assert_eq!(v.violated.as_deref(), Some("C4"));
    }

    #[test]
    fn pair_region_points() {
        assert!(xi3_pair_member(pair(0.0, 0.0), TOL).member);
        let corner = xi3_pair_member(pair(0.5, -0.5), TOL);
        assert!(corner.member);
        assert_eq!(corner.margin, 0.0);
        assert!(!xi3_pair_member(pair(0.2, 0.3), TOL).member);
        assert!(!xi3_pair_member(pair(0.95, -0.3), TOL).member);
        assert!(xi3_pair_member(pair(0.9, -0.2), TOL).member);
    }

    #[test]
    fn boundary_examples() {
        let (p, c) = xi3_boundary(0.0).unwrap();
        assert_eq!((p.lambda2, p.lambda3, c), (1.0, 0.0, Curve::C3));
        let (p, c) = xi3_boundary(-1.0).unwrap();
        assert_eq!((p.lambda2, p.lambda3, c), (0.5, -0.5, Curve::C4));
        assert!(xi3_boundary(1.5).is_err());
    }

    #[test]
    fn c4_c5_junction_is_continuous() {
        let k = -junction_slope();
        let c4 = 1.0 / (2.0 * (-k).sqrt());
        let c5 = (1.0 + k) / (1.0 + k + k * k);
        assert_abs_diff_eq!(c4, c5, epsilon = 1e-12);
        assert_abs_diff_eq!(c4, phi_bound(), epsilon = 1e-12);
        let (p, _) = xi3_boundary(k).unwrap();
        assert_abs_diff_eq!(p.lambda2, phi_bound(), epsilon = 1e-12);
    }

    #[test]
    fn theta_examples() {
        assert!(theta_member(Complex64::new(-1.0, 0.0), 3, TOL).unwrap().member);
        let vertex = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        assert!(theta_member(vertex, 3, TOL).unwrap().member);
        let v = theta_member(Complex64::new(-0.8, 0.3), 3, TOL).unwrap();
        assert!(!v.member);
        assert_abs_diff_eq!(v.margin, -0.3, epsilon = 1e-12);
        assert!(theta_member(Complex64::new(0.9, 0.0), 3, TOL).unwrap().member);
        assert!(!theta_member(Complex64::new(0.0, 0.5), 2, TOL).unwrap().member);
        assert!(theta_member(Complex64::new(-1.0, 0.0), 2, TOL).unwrap().member);
        assert!(theta_member(Complex64::new(0.0, 0.0), 4, TOL).is_err());
    }

    #[test]
    fn stochastic_pair_examples() {
        assert!(stochastic3_real_pair_member(pair(1.0, -1.0), TOL).member);
        let v = stochastic3_real_pair_member(pair(-0.4, -0.7), TOL);
        assert!(!v.member);
        assert_eq!(v.violated.as_deref(), Some("trace>=0"));
        assert!(stochastic3_real_pair_member(pair(0.0, 0.0), TOL).member);
    }

    #[test]
    fn names_round_trip() {
        for r in RegionName::ALL {
            assert_eq!(r.as_str().parse::<RegionName>().unwrap(), r);
        }
        assert!("xi4".parse::<RegionName>().is_err());
        let v = RegionName::Xi3Pair.evaluate(&[1.0, -0.5], TOL).unwrap();
        assert_eq!(v.violated.as_deref(), Some("C4"));
        assert!(RegionName::Xi3Pair.evaluate(&[1.0], TOL).is_err());
    }
}
