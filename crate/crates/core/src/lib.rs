//! Spectral analysis of monotone stochastic matrices.
//!
//! A stochastic matrix is monotone when each row is stochastically dominated
//! by the next. This crate validates such matrices, forms their dominance
//! matrices, computes spectra, tests membership in the known eigenvalue
//! regions, builds explicit realising matrices and runs the reduction from an
//! `n×n` monotone matrix to `(n−1)×(n−1)` stochastic matrices.

pub mod cli;
pub mod dominance;
pub mod error;
pub mod experiments;
pub mod matrix;
pub mod realise;
pub mod reduction;
pub mod regions;
pub mod sampler;
pub mod spectra;
pub mod svg;

pub use dominance::{check_liftable, dominance_of, lift, DominanceMatrix, LiftWitness, Liftability};
pub use error::{Error, Result};
pub use experiments::{run_experiment, Dataset, Experiment, ExperimentRecord};
pub use matrix::{validate_monotone, validate_stochastic, MonotoneMatrix, StochasticMatrix, DEFAULT_TOL};
pub use realise::{family_matrix, realise_eigenvalue, realise_pair, Family, FamilyId};
pub use reduction::{check_containment, reduce, ReductionResult};
pub use regions::{Curve, RegionName, RegionVerdict};
pub use sampler::{sample_monotone, SampleConfig};
pub use spectra::{spectrum_of_dominance, spectrum_of_stochastic, EigenPair, Spectrum};
