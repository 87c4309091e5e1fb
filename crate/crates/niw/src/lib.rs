//! Normal-inverse-Wishart distributions as a minimal exponential family.
//!
//! The NIW distribution over a mean vector and covariance matrix is the
//! conjugate prior for a multivariate Gaussian with unknown mean and
//! covariance. This crate provides:
//!
//! - the three parameterizations (standard, natural, mean) with eager
//!   validation and conversions between them,
//! - log densities via the exponential-family identity,
//! - the forward map from natural to mean parameters (the gradient of the
//!   log partition function),
//! - the reverse map from mean to natural parameters, closed-form except
//!   for the degrees of freedom, which is found by a bracketed
//!   Newton-Raphson solve with guaranteed monotone convergence,
//! - a seeded sampler (inverse-Wishart via Bartlett, then a Gaussian) that
//!   doubles as a Monte Carlo cross-check of the forward map.
//!
//! Matrices are dense, symmetric, and small (dimension in the tens); see
//! [`linalg`] for the storage and flattening conventions.

pub mod error;
pub mod forward;
pub mod linalg;
pub mod model;
pub mod reverse;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
pub use forward::mean_from_natural;
pub use linalg::{CholeskyFactor, SymmetricMatrix};
pub use model::{
    inner_product, log_base_measure, log_partition, log_pdf, sufficient_statistic, MeanParams,
    NaturalParams, StandardParams, SufficientStats,
};
pub use reverse::{
    f_nu, f_prime_nu, find_nu, natural_from_mean, standard_from_mean, NuSolveReport,
    NuSolverConfig,
};
pub use sampling::{
    mc_mean_sufficient_stats, sample_inverse_wishart, sample_niw, MomentEstimate, RandomSource,
};
