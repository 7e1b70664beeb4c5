//! Eigenvalue engines.
//!
//! Small dense spectra are computed from the characteristic polynomial
//! (Faddeev–LeVerrier coefficients, Durand–Kerner roots, Newton polish). For
//! stochastic inputs the eigenvalue 1 is known exactly and divided out before
//! root finding.

mod normal_form;
mod perron;
pub mod poly;

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::dominance::DominanceMatrix;
use crate::error::{Error, Result};
use crate::matrix::StochasticMatrix;

pub use normal_form::{frobenius_normal_form, NormalForm};
pub use perron::{perron, PerronData};

/// Largest stochastic dimension handled by the polynomial pipeline.
pub const MAX_SPECTRUM_DIM: usize = 12;

/// Imaginary parts below this (relative to `max(1, |z|)`) are treated as zero.
const REAL_SNAP: f64 = 1e-11;

/// Multiset of eigenvalues, ordered by real part then imaginary part, both descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    trivial_included: bool,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, trivial_included: bool) -> Self {
        let mut values = values;
        values.sort_by(compare_eigenvalues);
        Self { values, trivial_included }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn trivial_included(&self) -> bool {
        self.trivial_included
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> Complex64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> Complex64 {
        self.values.iter().product()
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imaginary(&self) -> f64 {
        self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// The spectrum with one copy of the eigenvalue closest to 1 removed.
    pub fn without_trivial(&self) -> Spectrum {
        let mut values = self.values.clone();
        if let Some((idx, _)) = values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - 1.0).norm().total_cmp(&(b.1 - 1.0).norm()))
        {
            values.remove(idx);
        }
        Spectrum { values, trivial_included: false }
    }

    /// The spectrum with an extra eigenvalue 1.
    pub fn with_trivial(&self) -> Spectrum {
        let mut values = self.values.clone();
        values.push(Complex64::new(1.0, 0.0));
        Spectrum::new(values, true)
    }

    /// Largest distance between matched eigenvalues, matching each value of
    /// `self` greedily to its nearest unused value in `other`. Infinite when
    /// the multiplicities differ.
    pub fn distance(&self, other: &Spectrum) -> f64 {
        match_distance(&self.values, &other.values)
    }

    /// Groups numerically equal eigenvalues as `(value, multiplicity)`.
    pub fn grouped(&self, tol: f64) -> Vec<(Complex64, usize)> {
        let mut out: Vec<(Complex64, usize)> = Vec::new();
        for &z in &self.values {
            match out.iter_mut().find(|(w, _)| (z - *w).norm() <= tol) {
                Some(entry) => entry.1 += 1,
                None => out.push((z, 1)),
            }
        }
        out
    }
}

pub(crate) fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let best = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .min_by(|x, y| (x.1 - z).norm().total_cmp(&(y.1 - z).norm()));
        if let Some((j, w)) = best {
            used[j] = true;
            worst = worst.max((w - z).norm());
        }
    }
    worst
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            values: Vec<ComplexJson>,
            trivial_included: bool,
        }
        Repr {
            values: self.values.iter().map(|z| ComplexJson { re: z.re, im: z.im }).collect(),
            trivial_included: self.trivial_included,
        }
        .serialize(serializer)
    }
}

pub(crate) fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    ComplexJson { re: z.re, im: z.im }.serialize(s)
}

pub(crate) fn serialize_complex_vec<S: Serializer>(zs: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    zs.iter()
        .map(|z| ComplexJson { re: z.re, im: z.im })
        .collect::<Vec<_>>()
        .serialize(s)
}

fn compare_eigenvalues(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then_with(|| b.im.total_cmp(&a.im))
}

/// The nontrivial eigenvalues of a 3×3 monotone matrix, `lambda2 ≥ lambda3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    pub lambda2: f64,
    pub lambda3: f64,
}

impl EigenPair {
    /// Orders the two values so that `lambda2 ≥ lambda3`.
    pub fn new(x: f64, y: f64) -> Self {
        Self { lambda2: x.max(y), lambda3: x.min(y) }
    }

    pub fn scaled(self, t: f64) -> Self {
        Self { lambda2: t * self.lambda2, lambda3: t * self.lambda3 }
    }
}

/// Closed-form eigenvalues of a 2×2 dominance matrix `[[a, b], [c, d]]`.
pub fn eigenpair_3x3(d: &DominanceMatrix) -> Result<EigenPair> {
    let (a, b, c, dd) = d.abcd()?;
    let disc = ((a - dd) * (a - dd) + 4.0 * b * c).max(0.0);
    let root = disc.sqrt();
    Ok(EigenPair { lambda2: (a + dd + root) / 2.0, lambda3: (a + dd - root) / 2.0 })
}

/// Snaps rounding-level imaginary parts to zero and makes complex values
/// come in exact conjugate pairs.
fn clean_real_polynomial_roots(values: &mut [Complex64]) {
    for z in values.iter_mut() {
        if z.im.abs() <= REAL_SNAP * z.norm().max(1.0) {
            z.im = 0.0;
        }
    }
    let mut paired = vec![false; values.len()];
    for i in 0..values.len() {
        if paired[i] || values[i].im <= 0.0 {
            continue;
        }
        let target = values[i].conj();
        let partner = (0..values.len())
            .filter(|&j| !paired[j] && j != i && values[j].im < 0.0)
            .min_by(|&x, &y| (values[x] - target).norm().total_cmp(&(values[y] - target).norm()));
        if let Some(j) = partner {
            let avg = (values[i] + values[j].conj()) / 2.0;
            values[i] = avg;
            values[j] = avg.conj();
            paired[i] = true;
            paired[j] = true;
        }
    }
}

/// Full spectrum of a stochastic matrix, the eigenvalue 1 included.
pub fn spectrum_of_stochastic(s: &StochasticMatrix) -> Result<Spectrum> {
    let n = s.n();
    if n > MAX_SPECTRUM_DIM {
        return Err(Error::Dimension(format!("spectrum supports n ≤ {MAX_SPECTRUM_DIM}, got {n}")));
    }
    let full = poly::faddeev_leverrier(s.entries());
    let (mut reduced, _) = poly::deflate(&full, 1.0);
    let mut ones = 1;
    while reduced.len() > 1 && poly::is_numerical_root(&reduced, 1.0) {
        reduced = poly::deflate(&reduced, 1.0).0;
        ones += 1;
    }

    let mut values = poly::roots(&reduced)?;
    let simple: Vec<bool> = values
        .iter()
        .map(|z| values.iter().filter(|w| *w == z).count() == 1)
        .collect();
    for (z, is_simple) in values.iter_mut().zip(simple) {
        if is_simple {
            *z = poly::newton_polish(&full, *z);
        }
    }
    values.extend(std::iter::repeat_n(Complex64::new(1.0, 0.0), ones));
    clean_real_polynomial_roots(&mut values);
    Ok(Spectrum::new(values, true))
}

/// Spectrum of a square non-negative matrix through the same polynomial pipeline.
pub fn spectrum_of_matrix(a: &DMatrix<f64>) -> Result<Spectrum> {
    let m = a.nrows();
    if m + 1 > MAX_SPECTRUM_DIM {
        return Err(Error::Dimension(format!(
            "spectrum supports dimension ≤ {}, got {m}",
            MAX_SPECTRUM_DIM - 1
        )));
    }
    let coeffs = poly::faddeev_leverrier(a);
    let mut values = poly::roots(&coeffs)?;
    clean_real_polynomial_roots(&mut values);
    Ok(Spectrum::new(values, false))
}

/// Spectrum of a dominance matrix, equal to the nontrivial spectrum of its source.
pub fn spectrum_of_dominance(d: &DominanceMatrix) -> Result<Spectrum> {
    spectrum_of_matrix(d.entries())
}
