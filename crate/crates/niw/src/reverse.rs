//! Reverse mapping: mean parameters back to natural (or standard)
//! parameters. `mu0`, `lambda`, and `psi` have closed forms given `nu`; `nu`
//! itself is the root of a scalar function `f` that is strictly increasing
//! and strictly concave on `nu > d - 1`, so bracketed Newton-Raphson started
//! from a point with `f <= 0` converges monotonically from below.

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::model::{MeanParams, NaturalParams, StandardParams};
use crate::special;

/// Settings for the degrees-of-freedom root-find.
#[derive(Debug, Clone, PartialEq)]
pub struct NuSolverConfig {
    /// Initial guess; `None` defaults to `d` at solve time. Must exceed
    /// `d - 1` when given.
    pub nu0: Option<f64>,
    /// Convergence tolerance on `|f(nu)|`.
    pub epsilon: f64,
    pub max_newton_iters: u32,
    pub max_bracket_halvings: u32,
}

impl Default for NuSolverConfig {
    fn default() -> Self {
        Self {
            nu0: None,
            epsilon: 1e-10,
            max_newton_iters: 100,
            max_bracket_halvings: 200,
        }
    }
}

/// Diagnostics from a completed root-find.
#[derive(Debug, Clone, PartialEq)]
pub struct NuSolveReport {
    pub nu: f64,
    pub bracket_halvings: u32,
    pub newton_iters: u32,
    pub final_abs_f: f64,
}

/// The root function
/// `f(nu) = log|-2 M1| - d log(nu/2) + sum_{i<d} psi((nu-i)/2) - 2 m4`,
/// whose unique zero on `nu > d - 1` is the degrees-of-freedom parameter.
pub fn f_nu(nu: f64, logdet_neg2m1: f64, m4: f64, d: usize) -> Result<f64> {
    let dd = d as f64;
    Ok(logdet_neg2m1 - dd * (nu / 2.0).ln() + special::digamma_sum(nu, d)? - 2.0 * m4)
}

/// `f'(nu) = -d/nu + 1/2 sum_{i<d} psi'((nu-i)/2)`; strictly positive on
/// the domain (bounded below by `d/nu^2`).
pub fn f_prime_nu(nu: f64, d: usize) -> Result<f64> {
    Ok(-(d as f64) / nu + 0.5 * special::trigamma_sum(nu, d)?)
}

/// Solves `f(nu) = 0` by halving the distance between `nu` and `d - 1`
/// until `f(nu) <= 0`, then running Newton-Raphson.
///
/// Since `psi(x) < log x`, `f` is bounded above by
/// `log|-2 M1| - 2 m4`; when that bound is non-positive no root exists and
/// the solve fails fast with [`Error::NoRoot`] instead of halving forever.
/// A secondary stop triggers when the Newton step falls below
/// `epsilon * max(1, nu)`, which covers near-supremum `m4` where the root
/// sits at very large `nu` and `f` is almost flat.
pub fn find_nu(logdet_neg2m1: f64, m4: f64, d: usize, cfg: &NuSolverConfig) -> Result<NuSolveReport> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !logdet_neg2m1.is_finite() || !m4.is_finite() {
        return Err(Error::InvalidArgument(
            "logdet_neg2m1 and m4 must be finite".into(),
        ));
    }
    let dm1 = d as f64 - 1.0;
    let nu0 = cfg.nu0.unwrap_or(d as f64);
    if !cfg.epsilon.is_finite() || cfg.epsilon <= 0.0 {
        return Err(Error::InvalidSolverConfig(format!(
            "epsilon must be positive, got {}",
            cfg.epsilon
        )));
    }
    if cfg.max_newton_iters == 0 || cfg.max_bracket_halvings == 0 {
        return Err(Error::InvalidSolverConfig(
            "iteration caps must be positive".into(),
        ));
    }
    if !nu0.is_finite() || nu0 <= dm1 {
        return Err(Error::InvalidSolverConfig(format!(
            "nu0 must exceed d - 1 = {dm1}, got {nu0}"
        )));
    }

    let gap = logdet_neg2m1 - 2.0 * m4;
    if gap <= 0.0 {
        return Err(Error::NoRoot(format!(
            "log|-2 m1| - 2 m4 = {gap} is not positive, so f(nu) < 0 everywhere"
        )));
    }

    // Bracket: walk nu toward d - 1 until f(nu) <= 0.
    let mut nu = nu0;
    let mut fv = f_nu(nu, logdet_neg2m1, m4, d)?;
    let mut halvings = 0u32;
    while fv > 0.0 {
        if halvings >= cfg.max_bracket_halvings {
            return Err(Error::BracketingFailed { halvings });
        }
        nu = dm1 + 0.5 * (nu - dm1);
        halvings += 1;
        fv = f_nu(nu, logdet_neg2m1, m4, d)?;
    }

    // Newton from below; concavity keeps the iterates nondecreasing and
    // never past the root.
    let mut iters = 0u32;
    while fv.abs() > cfg.epsilon {
        if iters >= cfg.max_newton_iters {
            return Err(Error::NewtonStalled {
                iters,
                final_abs_f: fv.abs(),
            });
        }
        let step = fv / f_prime_nu(nu, d)?;
        nu -= step;
        iters += 1;
        fv = f_nu(nu, logdet_neg2m1, m4, d)?;
        if step.abs() <= cfg.epsilon * nu.max(1.0) {
            break;
        }
    }

    Ok(NuSolveReport {
        nu,
        bracket_halvings: halvings,
        newton_iters: iters,
        final_abs_f: fv.abs(),
    })
}

/// Recovers the standard parameterization:
/// `mu0 = (-2 M1)^{-1} m2`, `lambda = -d / (2 m3 + m2' mu0)`,
/// `nu` from [`find_nu`], and `psi = nu (-2 M1)^{-1}`.
pub fn standard_from_mean(
    m: &MeanParams,
    cfg: &NuSolverConfig,
) -> Result<(StandardParams, NuSolveReport)> {
    let d = m.dim();
    let neg2m1 = m.m1().scale(-2.0);
    let chol = neg2m1.cholesky()?;
    let mu0 = chol.solve(m.m2())?;
    let lambda = -(d as f64) / (2.0 * m.m3() + dot(m.m2(), &mu0));
    let report = find_nu(chol.log_det(), m.m4(), d, cfg)?;
    let psi = chol.inverse().scale(report.nu);
    let params = StandardParams::new(mu0, lambda, psi, report.nu)?;
    Ok((params, report))
}

/// Recovers the natural parameterization,
/// `(psi + lambda mu0 mu0', lambda mu0, lambda, nu)`.
pub fn natural_from_mean(
    m: &MeanParams,
    cfg: &NuSolverConfig,
) -> Result<(NaturalParams, NuSolveReport)> {
    let (params, report) = standard_from_mean(m, cfg)?;
    Ok((params.to_natural(), report))
}
