//! Seeded generation of random monotone matrices.
//!
//! A matrix is drawn through its prefix-sum table. The first row's partial
//! sums are sorted uniforms; each later entry `K[i][l]` is uniform on
//! `[K[i][l−1], K[i−1][l]]`, an interval that is never empty because
//! `K[i][l−1] ≤ K[i−1][l−1] ≤ K[i−1][l]`. Differencing the table recovers the
//! entries. The distribution is not uniform over the monotone polytope.
//!
//! Sample `i` uses its own ChaCha stream selected by `i`, so the output does
//! not depend on how samples are distributed over worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{MonotoneMatrix, DEFAULT_TOL, MAX_DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub workers: usize,
}

impl SampleConfig {
    pub fn new(n: usize, count: usize, seed: u64) -> Self {
        Self { n, count, seed, workers: 1 }
    }

    pub fn with_workers(self, workers: usize) -> Self {
        Self { workers, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_DIM {
            return Err(Error::Dimension(format!("sample dimension must be in 1..={MAX_DIM}, got {}", self.n)));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }
}

/// The random stream of sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draws a single monotone matrix from the prefix-sum chain.
pub fn draw_monotone<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<MonotoneMatrix> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension(format!("sample dimension must be in 1..={MAX_DIM}, got {n}")));
    }
    let w = n - 1;
    let mut table = vec![vec![0.0f64; w]; n];
    let mut first: Vec<f64> = (0..w).map(|_| rng.random::<f64>()).collect();
    first.sort_by(f64::total_cmp);
    table[0] = first;
    for i in 1..n {
        for l in 0..w {
            let lo = if l == 0 { 0.0 } else { table[i][l - 1] };
            let hi = table[i - 1][l];
            table[i][l] = lo + rng.random::<f64>() * (hi - lo);
        }
    }
    let rows: Vec<Vec<f64>> = table
        .iter()
        .map(|k| {
            (0..n)
                .map(|j| {
                    let upper = if j < w { k[j] } else { 1.0 };
                    let lower = if j == 0 { 0.0 } else { k[j - 1] };
                    upper - lower
                })
                .collect()
        })
        .collect();
    MonotoneMatrix::new(&rows, DEFAULT_TOL)
}

/// Sample `index` of the stream defined by `(n, seed)`.
pub fn sample_one(n: usize, seed: u64, index: u64) -> Result<MonotoneMatrix> {
    draw_monotone(n, &mut sample_rng(seed, index))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))
}

/// Applies `f` to every sample of the configuration in parallel and returns
/// the results ordered by sample index.
pub fn map_samples<T, F>(cfg: &SampleConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, MonotoneMatrix) -> Result<T> + Sync + Send,
{
    cfg.check()?;
    let n = cfg.n;
    let seed = cfg.seed;
    pool(cfg.workers)?.install(|| {
        (0..cfg.count as u64)
            .into_par_iter()
            .map(|i| sample_one(n, seed, i).and_then(|m| f(i, m)))
            .collect()
    })
}

/// All samples of the configuration, in index order.
pub fn sample_monotone(cfg: &SampleConfig) -> Result<Vec<MonotoneMatrix>> {
    map_samples(cfg, |_, m| Ok(m))
}
