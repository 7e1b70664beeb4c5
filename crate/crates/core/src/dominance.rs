//! The dominance matrix of a monotone matrix and the inverse lift for n = 3.
//!
//! For an n×n monotone matrix `M` the dominance matrix is the (n−1)×(n−1)
//! array of consecutive prefix-sum differences
//!
//! ```text
//! D(M)[k][l] = Σ_{j≤l} m[k][j] − Σ_{j≤l} m[k+1][j]
//! ```
//!
//! It is non-negative exactly when `M` is monotone and carries the
//! nontrivial spectrum of `M`. For n = 3 the entries are named `a, b, c, d`
//! row-major.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{check_square, prefix_sums, to_rows, MonotoneMatrix, DEFAULT_TOL};

/// A non-negative square matrix playing the role of `D(M)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceMatrix {
    entries: DMatrix<f64>,
}

impl DominanceMatrix {
    /// Wraps an arbitrary non-negative square array; entries in `[-tol, 0)` clamp to zero.
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        if rows.is_empty() {
            return Ok(Self { entries: DMatrix::zeros(0, 0) });
        }
        let m = check_square(rows)?;
        let mut entries = DMatrix::zeros(m, m);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
                if v < -tol {
                    return Err(Error::NegativeEntry { row: i + 1, col: j + 1, value: v });
                }
                entries[(i, j)] = v.max(0.0);
            }
        }
        Ok(Self { entries })
    }

    pub fn from_dmatrix(entries: DMatrix<f64>, tol: f64) -> Result<Self> {
        Self::new(&to_rows(&entries), tol)
    }

    /// Dimension n − 1.
    pub fn m(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        to_rows(&self.entries)
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    /// The 2×2 entries `(a, b, c, d)`.
    pub fn abcd(&self) -> Result<(f64, f64, f64, f64)> {
        if self.m() != 2 {
            return Err(Error::Dimension(format!("expected a 2×2 dominance matrix, got {}×{}", self.m(), self.m())));
        }
        let e = &self.entries;
        Ok((e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)]))
    }
}

/// Computes `D(M)`; rounding residues below zero are clamped.
pub fn dominance_of(m: &MonotoneMatrix) -> Result<DominanceMatrix> {
    let n = m.n();
    if n < 2 {
        return Err(Error::Dimension("dominance matrix needs n ≥ 2".into()));
    }
    let k = prefix_sums(m.as_stochastic());
    let entries = DMatrix::from_fn(n - 1, n - 1, |r, l| (k.get(r, l) - k.get(r + 1, l)).max(0.0));
    Ok(DominanceMatrix { entries })
}

/// One named inequality together with its slack (negative when violated).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub satisfied: bool,
    pub slack: f64,
}

impl ConstraintCheck {
    fn new(name: impl Into<String>, slack: f64, tol: f64) -> Self {
        Self { name: name.into(), satisfied: slack >= -tol, slack }
    }
}

/// Names of the eight necessary conditions on a 2×2 dominance matrix, in report order.
pub const LEMMA1_CONSTRAINTS: [&str; 8] = [
    "a+c<=1",
    "b+c<=1",
    "b+d<=1",
    "ac<=1/4",
    "bc<=1/4",
    "bd<=1/4",
    "trace>=0",
    "det>=-1/4",
];

/// Evaluates the sum, product, trace and determinant bounds every 2×2
/// dominance matrix of a 3×3 monotone matrix satisfies.
pub fn check_lemma1(d: &DominanceMatrix, tol: f64) -> Result<Vec<ConstraintCheck>> {
    let (a, b, c, dd) = d.abcd()?;
    let slacks = [
        1.0 - (a + c),
        1.0 - (b + c),
        1.0 - (b + dd),
        0.25 - a * c,
        0.25 - b * c,
        0.25 - b * dd,
        a + dd,
        a * dd - b * c + 0.25,
    ];
    Ok(LEMMA1_CONSTRAINTS
        .iter()
        .zip(slacks)
        .map(|(name, slack)| ConstraintCheck::new(*name, slack, tol))
        .collect())
}

/// Column-sum and trace conditions valid for any n.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralReport {
    pub column_sums: Vec<ConstraintCheck>,
    pub trace: ConstraintCheck,
}

impl GeneralReport {
    pub fn all_satisfied(&self) -> bool {
        self.trace.satisfied && self.column_sums.iter().all(|c| c.satisfied)
    }

    pub fn min_slack(&self) -> f64 {
        self.column_sums
            .iter()
            .map(|c| c.slack)
            .fold(self.trace.slack, f64::min)
    }
}

pub fn check_general_properties(d: &DominanceMatrix, tol: f64) -> GeneralReport {
    let m = d.m();
    let column_sums = (0..m)
        .map(|l| {
            let sum: f64 = (0..m).map(|k| d.get(k, l)).sum();
            ConstraintCheck::new(format!("column {} sum<=1", l + 1), 1.0 - sum, tol)
        })
        .collect();
    GeneralReport { column_sums, trace: ConstraintCheck::new("trace>=0", d.trace(), tol) }
}

/// Corner values `m11`, `m33` from which a 3×3 monotone matrix is rebuilt.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiftWitness {
    pub m11: f64,
    pub m33: f64,
}

/// Outcome of the liftability test.
#[derive(Clone, Debug, PartialEq)]
pub enum Liftability {
    Feasible(LiftWitness),
    Infeasible { bound: &'static str, excess: f64 },
}

impl Liftability {
    pub fn witness(&self) -> Option<LiftWitness> {
        match self {
            Liftability::Feasible(w) => Some(*w),
            Liftability::Infeasible { .. } => None,
        }
    }
}

/// The inequalities a witness must satisfy, as `(name, slack)`.
fn witness_slacks(a: f64, b: f64, c: f64, d: f64, w: LiftWitness) -> [(&'static str, f64); 7] {
    let total = w.m11 + w.m33;
    [
        ("m11>=a+c", w.m11 - (a + c)),
        ("m33>=b+d", w.m33 - (b + d)),
        ("m11<=1", 1.0 - w.m11),
        ("m33<=1", 1.0 - w.m33),
        ("m11+m33<=1+b+d", 1.0 + b + d - total),
        ("m11+m33<=1+a+d", 1.0 + a + d - total),
        ("m11+m33<=1+a+c", 1.0 + a + c - total),
    ]
}

/// Decides whether a non-negative 2×2 matrix is the dominance matrix of some
/// 3×3 monotone matrix. The returned witness is always the minimal one
/// `(a + c, b + d)`; any feasible witness exists iff the minimal one is feasible.
pub fn check_liftable(d: &DominanceMatrix, tol: f64) -> Result<Liftability> {
    let (a, b, c, dd) = d.abcd()?;
    let w = LiftWitness { m11: a + c, m33: b + dd };
    for (name, slack) in witness_slacks(a, b, c, dd, w) {
        if slack < -tol {
            return Ok(Liftability::Infeasible { bound: name, excess: -slack });
        }
    }
    Ok(Liftability::Feasible(w))
}

/// Rebuilds a 3×3 monotone matrix with dominance matrix `d` from the corner
/// values of `w`.
pub fn lift(d: &DominanceMatrix, w: LiftWitness, tol: f64) -> Result<MonotoneMatrix> {
    let (a, b, c, dd) = d.abcd()?;
    for (name, slack) in witness_slacks(a, b, c, dd, w) {
        if slack < -tol {
            return Err(Error::WitnessInvalid(format!("{name} fails by {:e}", -slack)));
        }
    }
    let LiftWitness { m11, m33 } = w;
    let clamp = |v: f64| if v < 0.0 && v >= -tol { 0.0 } else { v };
    let rows = vec![
        vec![clamp(m11), clamp(1.0 - (m11 + m33 - b - dd)), clamp(m33 - b - dd)],
        vec![clamp(m11 - a), clamp(1.0 - (m11 - a + m33 - dd)), clamp(m33 - dd)],
        vec![clamp(m11 - a - c), clamp(1.0 - (m11 - a - c + m33)), clamp(m33)],
    ];
    MonotoneMatrix::new(&rows, tol.max(DEFAULT_TOL))
        .map_err(|e| Error::WitnessInvalid(format!("lifted matrix rejected: {e}")))
}
