//! The normal-inverse-Wishart model: the standard, natural, and mean
//! parameterizations, sufficient statistics, base measure, log partition
//! function, and log density.
//!
//! Densities are computed and exposed in the log domain only. Validation is
//! eager: constructors reject invariant violations instead of deferring the
//! failure to a downstream Cholesky.

use crate::error::{Error, Result};
use crate::linalg::{dot, SymmetricMatrix};
use crate::special;
use std::f64::consts::PI;

/// Location/scale parameterization `(mu0, lambda, psi, nu)`.
///
/// Invariants: `lambda > 0`, `psi` symmetric positive definite, and
/// `nu > d - 1` where `d` is the dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StandardParams {
    mu0: Vec<f64>,
    lambda: f64,
    psi: SymmetricMatrix,
    nu: f64,
}

impl StandardParams {
    pub fn new(mu0: Vec<f64>, lambda: f64, psi: SymmetricMatrix, nu: f64) -> Result<Self> {
        let d = psi.dim();
        if mu0.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: mu0.len(),
            });
        }
        if mu0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidStandardParams(
                "mu0 entries must be finite".into(),
            ));
        }
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidStandardParams(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        if psi.cholesky().is_err() {
            return Err(Error::InvalidStandardParams(
                "psi must be symmetric positive definite".into(),
            ));
        }
        if !nu.is_finite() || nu <= d as f64 - 1.0 {
            return Err(Error::InvalidStandardParams(format!(
                "nu must exceed d - 1 = {}, got {nu}",
                d as f64 - 1.0
            )));
        }
        Ok(Self {
            mu0,
            lambda,
            psi,
            nu,
        })
    }

    pub fn dim(&self) -> usize {
        self.psi.dim()
    }

    pub fn mu0(&self) -> &[f64] {
        &self.mu0
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn psi(&self) -> &SymmetricMatrix {
        &self.psi
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// `eta = (psi + lambda mu0 mu0', lambda mu0, lambda, nu)`.
    pub fn to_natural(&self) -> NaturalParams {
        let eta1 = self
            .psi
            .add(&SymmetricMatrix::outer(&self.mu0).scale(self.lambda));
        let eta2 = self.mu0.iter().map(|v| self.lambda * v).collect();
        NaturalParams {
            eta1,
            eta2,
            eta3: self.lambda,
            eta4: self.nu,
        }
    }
}

/// Natural (canonical exponential-family) parameterization.
///
/// `eta1` is kept in matrix form; the flattening to a d^2 vector happens
/// only at serialization boundaries. Invariants: `eta3 > 0`,
/// `eta4 > d - 1`, and `eta1 - eta2 eta2' / eta3` (the recovered scale
/// matrix) symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParams {
    eta1: SymmetricMatrix,
    eta2: Vec<f64>,
    eta3: f64,
    eta4: f64,
}

impl NaturalParams {
    pub fn new(eta1: SymmetricMatrix, eta2: Vec<f64>, eta3: f64, eta4: f64) -> Result<Self> {
        let d = eta1.dim();
        if eta2.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: eta2.len(),
            });
        }
        if eta2.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidNaturalParams(
                "eta2 entries must be finite".into(),
            ));
        }
        if !eta3.is_finite() || eta3 <= 0.0 {
            return Err(Error::InvalidNaturalParams(format!(
                "eta3 must be positive, got {eta3}"
            )));
        }
        if !eta4.is_finite() || eta4 <= d as f64 - 1.0 {
            return Err(Error::InvalidNaturalParams(format!(
                "eta4 must exceed d - 1 = {}, got {eta4}",
                d as f64 - 1.0
            )));
        }
        let p = Self {
            eta1,
            eta2,
            eta3,
            eta4,
        };
        if p.psi_matrix().cholesky().is_err() {
            return Err(Error::InvalidNaturalParams(
                "eta1 - eta2 eta2'/eta3 must be symmetric positive definite".into(),
            ));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.eta1.dim()
    }

    pub fn eta1(&self) -> &SymmetricMatrix {
        &self.eta1
    }

    pub fn eta2(&self) -> &[f64] {
        &self.eta2
    }

    pub fn eta3(&self) -> f64 {
        self.eta3
    }

    pub fn eta4(&self) -> f64 {
        self.eta4
    }

    /// The scale matrix `psi = eta1 - eta2 eta2' / eta3`.
    fn psi_matrix(&self) -> SymmetricMatrix {
        self.eta1
            .add(&SymmetricMatrix::outer(&self.eta2).scale(-1.0 / self.eta3))
    }

    /// Recovers `(mu0, lambda, psi, nu) = (eta2/eta3, eta3, eta1 - eta2
    /// eta2'/eta3, eta4)`.
    pub fn to_standard(&self) -> Result<StandardParams> {
        let mu0 = self.eta2.iter().map(|v| v / self.eta3).collect();
        StandardParams::new(mu0, self.eta3, self.psi_matrix(), self.eta4).map_err(|e| {
            Error::InvalidNaturalParams(format!("recovered standard parameters are invalid: {e}"))
        })
    }
}

/// Mean parameterization: the expected sufficient statistics
/// `(m1, m2, m3, m4)`, with `m1` kept in matrix form.
///
/// Constructor invariants: `-2 m1` symmetric positive definite (so `m1` is
/// negative definite) and `2 m3 + m2' (-2 m1)^{-1} m2 < 0` (so the
/// recovered precision scale is positive). The remaining feasibility
/// condition, `log|-2 m1| - 2 m4 > 0`, determines whether a degrees-of-
/// freedom root exists at all; it is enforced by the nu solver, which
/// reports `NoRoot` when it fails.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanParams {
    m1: SymmetricMatrix,
    m2: Vec<f64>,
    m3: f64,
    m4: f64,
}

impl MeanParams {
    pub fn new(m1: SymmetricMatrix, m2: Vec<f64>, m3: f64, m4: f64) -> Result<Self> {
        let d = m1.dim();
        if m2.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: m2.len(),
            });
        }
        if m2.iter().any(|v| !v.is_finite()) || !m3.is_finite() || !m4.is_finite() {
            return Err(Error::InvalidMeanParams(
                "mean parameter entries must be finite".into(),
            ));
        }
        let neg2m1 = m1.scale(-2.0);
        let chol = neg2m1.cholesky().map_err(|_| {
            Error::InvalidMeanParams("m1 must be negative definite (-2 m1 is not SPD)".into())
        })?;
        let mu0 = chol.solve(&m2)?;
        let denom = 2.0 * m3 + dot(&m2, &mu0);
        if !(denom < 0.0) {
            return Err(Error::InvalidMeanParams(format!(
                "2 m3 + m2' (-2 m1)^-1 m2 must be negative so the recovered lambda is positive, got {denom}"
            )));
        }
        Ok(Self { m1, m2, m3, m4 })
    }

    pub fn dim(&self) -> usize {
        self.m1.dim()
    }

    pub fn m1(&self) -> &SymmetricMatrix {
        &self.m1
    }

    pub fn m2(&self) -> &[f64] {
        &self.m2
    }

    pub fn m3(&self) -> f64 {
        self.m3
    }

    pub fn m4(&self) -> f64 {
        self.m4
    }
}

/// The four-block statistic `s(mu, Sigma)`, with the matrix block kept in
/// matrix form. Plain data; no invariants beyond finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SufficientStats {
    /// `-1/2 Sigma^{-1}`
    pub s1: SymmetricMatrix,
    /// `Sigma^{-1} mu`
    pub s2: Vec<f64>,
    /// `-1/2 mu' Sigma^{-1} mu`
    pub s3: f64,
    /// `-1/2 log |Sigma|`
    pub s4: f64,
}

/// Evaluates the sufficient statistic at a point `(mu, sigma)`.
pub fn sufficient_statistic(mu: &[f64], sigma: &SymmetricMatrix) -> Result<SufficientStats> {
    let d = sigma.dim();
    if mu.len() != d {
        return Err(Error::DimMismatch {
            expected: d,
            got: mu.len(),
        });
    }
    if mu.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("mu entries must be finite".into()));
    }
    let chol = sigma.cholesky()?;
    let s2 = chol.solve(mu)?;
    let s3 = -0.5 * dot(mu, &s2);
    let s1 = chol.inverse().scale(-0.5);
    let s4 = -0.5 * chol.log_det();
    Ok(SufficientStats { s1, s2, s3, s4 })
}

/// `log f(mu, Sigma) = -(d+2)/2 log |Sigma|`.
pub fn log_base_measure(sigma: &SymmetricMatrix) -> Result<f64> {
    let d = sigma.dim() as f64;
    Ok(-0.5 * (d + 2.0) * sigma.log_det()?)
}

/// The log partition function
/// `A(eta) = -(d/2) log eta3 - (eta4/2) log|eta1 - eta2 eta2'/eta3|
///  + (d/2) log 2 pi + (eta4 d / 2) log 2 + log Gamma_d(eta4 / 2)`.
pub fn log_partition(e: &NaturalParams) -> Result<f64> {
    let d = e.dim() as f64;
    let logdet_psi = e.psi_matrix().log_det()?;
    Ok(-0.5 * d * e.eta3.ln() - 0.5 * e.eta4 * logdet_psi
        + 0.5 * d * (2.0 * PI).ln()
        + 0.5 * e.eta4 * d * std::f64::consts::LN_2
        + special::multivariate_log_gamma(0.5 * e.eta4, e.dim())?)
}

/// Pairing `eta . s` with the matrix blocks combined by the Frobenius
/// (elementwise) inner product, which equals `vec(eta1) . vec(s1)`.
pub fn inner_product(e: &NaturalParams, s: &SufficientStats) -> Result<f64> {
    if e.dim() != s.s1.dim() || s.s2.len() != e.dim() {
        return Err(Error::DimMismatch {
            expected: e.dim(),
            got: s.s1.dim(),
        });
    }
    Ok(e.eta1.frob_dot(&s.s1) + dot(&e.eta2, &s.s2) + e.eta3 * s.s3 + e.eta4 * s.s4)
}

/// Log density at `(mu, sigma)` via the exponential-family identity
/// `log p = eta . s(mu, sigma) + log f(mu, sigma) - A(eta)`.
pub fn log_pdf(mu: &[f64], sigma: &SymmetricMatrix, e: &NaturalParams) -> Result<f64> {
    if sigma.dim() != e.dim() {
        return Err(Error::DimMismatch {
            expected: e.dim(),
            got: sigma.dim(),
        });
    }
    let s = sufficient_statistic(mu, sigma)?;
    Ok(inner_product(e, &s)? + log_base_measure(sigma)? - log_partition(e)?)
}
