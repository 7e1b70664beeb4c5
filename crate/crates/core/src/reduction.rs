//! Reduction of an n×n monotone matrix to (n−1)×(n−1) stochastic matrices.
//!
//! Each irreducible diagonal block `B` of the dominance matrix (in Frobenius
//! normal form) with Perron root `r > 0` and Perron vector `x` yields the
//! stochastic matrix `S = (1/r)·X⁻¹·B·X`, `X = diag(x)`, whose eigenvalues are
//! those of `B` divided by `r`. Since `r ≤ 1`, every nontrivial eigenvalue of
//! the monotone matrix is a shrunk copy of an eigenvalue of a stochastic
//! matrix of order at most n − 1.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dominance::dominance_of;
use crate::error::{Error, Result};
use crate::matrix::{to_rows, validate_stochastic, MonotoneMatrix, StochasticMatrix};
use crate::regions::{theta_member, RegionVerdict};
use crate::spectra::{
    frobenius_normal_form, perron, serialize_complex, serialize_complex_vec, spectrum_of_dominance,
    spectrum_of_matrix, spectrum_of_stochastic, Spectrum,
};

/// Perron roots at or below this are treated as zero.
pub const DEGENERATE_ROOT: f64 = 1e-12;

/// Allowed row-sum deviation of a similarity output.
pub const STOCHASTICITY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct LambdaMu {
    #[serde(serialize_with = "serialize_complex")]
    pub lambda: Complex64,
    #[serde(serialize_with = "serialize_complex")]
    pub mu: Complex64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReduction {
    /// Original indices (0-based) of the block within the dominance matrix.
    pub indices: Vec<usize>,
    pub r: f64,
    pub perron_vector: Vec<f64>,
    /// Rows of `(1/r)·X⁻¹·B·X` after validation.
    #[serde(serialize_with = "serialize_stochastic")]
    pub s: StochasticMatrix,
    /// Largest `|row sum − 1|` of the similarity before renormalization.
    pub row_sum_error: f64,
    #[serde(serialize_with = "serialize_complex_vec")]
    pub mu: Vec<Complex64>,
    #[serde(serialize_with = "serialize_complex_vec")]
    pub block_spectrum: Vec<Complex64>,
    /// Largest `|μ·r − λ|` over matched pairs.
    pub similarity_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateBlock {
    pub indices: Vec<usize>,
    pub r: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReductionResult {
    pub n: usize,
    pub blocks: Vec<BlockReduction>,
    pub lambda_map: Vec<LambdaMu>,
    pub degenerate: Vec<DegenerateBlock>,
}

fn serialize_stochastic<S: serde::Serializer>(m: &StochasticMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.rows().serialize(s)
}

impl ReductionResult {
    /// Union of block spectra and the zeros of degenerate blocks.
    pub fn nontrivial_spectrum(&self) -> Spectrum {
        let mut values: Vec<Complex64> = self.blocks.iter().flat_map(|b| b.block_spectrum.iter().copied()).collect();
        for d in &self.degenerate {
            values.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), d.indices.len()));
        }
        Spectrum::new(values, false)
    }

    pub fn max_row_sum_error(&self) -> f64 {
        self.blocks.iter().map(|b| b.row_sum_error).fold(0.0, f64::max)
    }

    pub fn max_similarity_error(&self) -> f64 {
        self.blocks.iter().map(|b| b.similarity_error).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reduction result serializes")
    }
}

/// Pairs each `λ` with the `μ` whose `μ·r` is nearest, without reuse.
fn pair_eigenvalues(lambdas: &[Complex64], mus: &[Complex64], r: f64) -> (Vec<LambdaMu>, f64) {
    let mut used = vec![false; mus.len()];
    let mut worst = 0.0f64;
    let mut pairs = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let best = (0..mus.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (mus[a] * r - lambda).norm().total_cmp(&(mus[b] * r - lambda).norm()));
        match best {
            Some(j) => {
                used[j] = true;
                worst = worst.max((mus[j] * r - lambda).norm());
                pairs.push(LambdaMu { lambda, mu: mus[j] });
            }
            None => worst = f64::INFINITY,
        }
    }
    (pairs, worst)
}

enum BlockOutcome {
    Reduced(BlockReduction),
    Degenerate(f64),
}

fn reduce_block(a: &DMatrix<f64>, indices: &[usize]) -> Result<BlockOutcome> {
    let size = indices.len();
    let block = DMatrix::from_fn(size, size, |i, j| a[(indices[i], indices[j])]);
    let data = perron(&block)?;
    if data.zero || data.r <= DEGENERATE_ROOT {
        return Ok(BlockOutcome::Degenerate(data.r));
    }
    if let Some(i) = data.x.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::PerronFailure(format!(
            "Perron vector component {} is not positive ({})",
            indices[i] + 1,
            data.x[i]
        )));
    }
    let r = data.r;
    let x = &data.x;
    let similar = DMatrix::from_fn(size, size, |i, j| block[(i, j)] * x[j] / (r * x[i]));

    let mut row_sum_error = 0.0f64;
    for i in 0..size {
        let sum: f64 = similar.row(i).sum();
        if (sum - 1.0).abs() > STOCHASTICITY_TOL {
            return Err(Error::StochasticityFailure { row: indices[i] + 1, sum });
        }
        row_sum_error = row_sum_error.max((sum - 1.0).abs());
    }
    let s = validate_stochastic(&to_rows(&similar), STOCHASTICITY_TOL)?;
    let mu = spectrum_of_stochastic(&s)?.values().to_vec();
    let block_spectrum = spectrum_of_matrix(&block)?.values().to_vec();
    let (_, similarity_error) = pair_eigenvalues(&block_spectrum, &mu, r);

    Ok(BlockOutcome::Reduced(BlockReduction {
        indices: indices.to_vec(),
        r,
        perron_vector: data.x,
        s,
        row_sum_error,
        mu,
        block_spectrum,
        similarity_error,
    }))
}

/// Runs the block-wise Perron similarity on `D(M)`.
pub fn reduce(m: &MonotoneMatrix) -> Result<ReductionResult> {
    let n = m.n();
    let d = dominance_of(m)?;
    let a = d.entries();
    let form = frobenius_normal_form(a, m.tol());
    let outcomes: Vec<Result<BlockOutcome>> = (0..form.blocks.len())
        .into_par_iter()
        .map(|b| reduce_block(a, form.block_indices(b)))
        .collect();

    let mut blocks = Vec::new();
    let mut degenerate = Vec::new();
    let mut lambda_map = Vec::new();
    for (b, outcome) in outcomes.into_iter().enumerate() {
        match outcome? {
            BlockOutcome::Reduced(block) => {
                let (pairs, _) = pair_eigenvalues(&block.block_spectrum, &block.mu, block.r);
                lambda_map.extend(pairs);
                blocks.push(block);
            }
            BlockOutcome::Degenerate(r) => {
                degenerate.push(DegenerateBlock { indices: form.block_indices(b).to_vec(), r });
            }
        }
    }
    Ok(ReductionResult { n, blocks, lambda_map, degenerate })
}

/// Checks every nontrivial eigenvalue of a 4×4 monotone matrix against the
/// eigenvalue region of 3×3 stochastic matrices.
pub fn check_containment(m: &MonotoneMatrix, tol: f64) -> Result<Vec<(Complex64, RegionVerdict)>> {
    if m.n() != 4 {
        return Err(Error::UnsupportedN(m.n()));
    }
    let spectrum = spectrum_of_dominance(&dominance_of(m)?)?;
    spectrum
        .values()
        .iter()
        .map(|&z| theta_member(z, 3, tol).map(|v| (z, v)))
        .collect()
}
