//! Row-stochastic and monotone matrix types.
//!
//! A [`StochasticMatrix`] is validated once on construction: entries inside
//! `[-tol, 0)` are clamped to zero and rows whose sum lies within `tol` of one
//! are divided by that sum. A [`MonotoneMatrix`] additionally certifies that
//! every row is stochastically dominated by the next one.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default validation tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Largest supported dimension.
pub const MAX_DIM: usize = 32;

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

/// Checks that `rows` is a non-empty square array of at most [`MAX_DIM`] rows.
pub(crate) fn check_square(rows: &[Vec<f64>]) -> Result<usize> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Dimension("matrix has no rows".into()));
    }
    if n > MAX_DIM {
        return Err(Error::Dimension(format!("n = {n} exceeds the supported maximum {MAX_DIM}")));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Dimension(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
    }
    Ok(n)
}

pub(crate) fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
pub(crate) fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j])
}

/// An n×n row-stochastic matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
    tol: f64,
}

impl StochasticMatrix {
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        validate_stochastic(rows, tol)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        validate_stochastic(&rows, DEFAULT_TOL)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn tol(&self) -> f64 {
        self.tol
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
}

/// Validates an n×n array as a row-stochastic matrix.
pub fn validate_stochastic(rows: &[Vec<f64>], tol: f64) -> Result<StochasticMatrix> {
    check_tol(tol)?;
    let n = check_square(rows)?;
    let mut entries = DMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i + 1, col: j + 1 });
            }
            if v < -tol {
                return Err(Error::NegativeEntry { row: i + 1, col: j + 1, value: v });
            }
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::RowSum { row: i + 1, sum });
        }
        let clamped: Vec<f64> = row.iter().map(|v| v.clamp(0.0, 1.0)).collect();
        let clamped_sum: f64 = clamped.iter().sum();
        for (j, v) in clamped.into_iter().enumerate() {
            entries[(i, j)] = if clamped_sum == 1.0 { v } else { v / clamped_sum };
        }
    }
    Ok(StochasticMatrix { entries, tol })
}

/// A stochastic matrix whose row `k + 1` stochastically dominates row `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonotoneMatrix {
    base: StochasticMatrix,
}

impl MonotoneMatrix {
    pub fn new(rows: &[Vec<f64>], tol: f64) -> Result<Self> {
        validate_monotone(validate_stochastic(rows, tol)?)
    }

    pub fn as_stochastic(&self) -> &StochasticMatrix {
        &self.base
    }

    pub fn into_stochastic(self) -> StochasticMatrix {
        self.base
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn tol(&self) -> f64 {
        self.base.tol
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.base.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.base.get(i, j)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.base.rows()
    }
}

/// Checks stochastic dominance on suffix sums, reporting the first violated
/// `(k, r)` pair (1-based, `k` the dominated row, `r` the suffix start column).
pub fn validate_monotone(s: StochasticMatrix) -> Result<MonotoneMatrix> {
    let n = s.n();
    let tol = s.tol;
    let suffix = |i: usize, r: usize| -> f64 { (r..n).map(|j| s.entries[(i, j)]).sum() };
    for k in 0..n.saturating_sub(1) {
        for r in 1..n {
            let deficit = suffix(k, r) - suffix(k + 1, r);
            if deficit > tol {
                return Err(Error::MonotoneViolation { k: k + 1, r: r + 1, deficit });
            }
        }
    }
    Ok(MonotoneMatrix { base: s })
}

/// Cumulative row sums `K[i][l] = Σ_{j≤l} m_ij`, omitting the last column.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixSumTable {
    rows: Vec<Vec<f64>>,
}

impl PrefixSumTable {
    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn get(&self, i: usize, l: usize) -> f64 {
        self.rows[i][l]
    }

    /// Number of stored columns (n − 1).
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.width() == 0
    }

    /// True when every column is non-increasing downwards within `tol`.
    pub fn is_column_nonincreasing(&self, tol: f64) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[0].iter().zip(&w[1]).all(|(up, down)| *down <= *up + tol))
    }

    /// True when every row is non-decreasing left to right within `tol`.
    pub fn is_row_nondecreasing(&self, tol: f64) -> bool {
        self.rows
            .iter()
            .all(|row| row.windows(2).all(|w| w[1] >= w[0] - tol))
    }
}

pub fn prefix_sums(s: &StochasticMatrix) -> PrefixSumTable {
    let n = s.n();
    let rows = (0..n)
        .map(|i| {
            let mut acc = 0.0;
            (0..n - 1)
                .map(|l| {
                    acc += s.entries[(i, l)];
                    acc
                })
                .collect()
        })
        .collect();
    PrefixSumTable { rows }
}

/// Entrywise `t·A + (1 − t)·B`, revalidated.
pub fn convex_combine(a: &StochasticMatrix, b: &StochasticMatrix, t: f64) -> Result<StochasticMatrix> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("cannot combine {}×{} with {}×{}", a.n(), a.n(), b.n(), b.n())));
    }
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("combination weight {t} outside [0, 1]")));
    }
    let combined = &a.entries * t + &b.entries * (1.0 - t);
    validate_stochastic(&to_rows(&combined), a.tol.max(b.tol))
}

/// [`convex_combine`] for monotone inputs; the result is monotone again.
pub fn convex_combine_monotone(a: &MonotoneMatrix, b: &MonotoneMatrix, t: f64) -> Result<MonotoneMatrix> {
    validate_monotone(convex_combine(&a.base, &b.base, t)?)
}

/// Determinant through LU with partial pivoting.
pub fn determinant(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 1.0;
    }
    m.clone().lu().determinant()
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<Vec<f64>>,
}

/// Parses a matrix in either the text format (first line `n`, then `n` rows of
/// `n` whitespace-separated decimals) or the JSON format `{"n": .., "rows": [..]}`.
pub fn parse_matrix(input: &str) -> Result<Vec<Vec<f64>>> {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        let parsed: MatrixJson =
            serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("invalid matrix JSON: {e}")))?;
        if parsed.rows.len() != parsed.n {
            return Err(Error::Dimension(format!(
                "declared n = {} but {} rows given",
                parsed.n,
                parsed.rows.len()
            )));
        }
        return Ok(parsed.rows);
    }

    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("first line must be the dimension, got `{header}`")))?;
    let mut rows = Vec::with_capacity(n);
    for line in lines {
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("not a number: `{tok}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Dimension(format!("declared n = {n} but {} rows given", rows.len())));
    }
    Ok(rows)
}

/// Reads and validates a stochastic matrix from text or JSON.
pub fn read_stochastic(input: &str, tol: f64) -> Result<StochasticMatrix> {
    validate_stochastic(&parse_matrix(input)?, tol)
}

/// Formats a number with 17 significant digits, or 6 decimals when `pretty`.
pub fn format_number(x: f64, pretty: bool) -> String {
    if pretty {
        let s = format!("{x:.6}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        if s == "-0" { "0".to_string() } else { s.to_string() }
    } else {
        format!("{x:.16e}")
    }
}

/// Writes rows in the text matrix format.
pub fn format_matrix(rows: &[Vec<f64>], pretty: bool) -> String {
    let mut out = format!("{}\n", rows.len());
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_number(v, pretty)).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn matrix_json(rows: &[Vec<f64>]) -> String {
    serde_json::to_string(&MatrixJson { n: rows.len(), rows: rows.to_vec() }).expect("matrix serializes")
}
