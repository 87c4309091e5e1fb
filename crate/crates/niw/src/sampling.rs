//! Monte Carlo sampling: inverse-Wishart draws via the Bartlett
//! decomposition, joint draws of `(mu, Sigma)`, and empirical moments of the
//! sufficient statistic. These serve as an independent check that the
//! forward map really is the expectation of the statistic.
//!
//! The stream is ChaCha8 seeded from a 64-bit integer; normal variates come
//! from the ziggurat sampler and chi-square variates from Marsaglia-Tsang
//! gamma sampling (both via `rand_distr`). Identical seeds give identical
//! sequences.

use crate::error::{Error, Result};
use crate::linalg::{CholeskyFactor, SymmetricMatrix};
use crate::model::{sufficient_statistic, StandardParams, SufficientStats};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Gamma, StandardNormal};

/// Deterministic pseudo-random stream. Not shareable between concurrent
/// callers; give each thread its own seeded instance.
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    fn chi_square(&mut self, df: f64) -> f64 {
        let gamma = Gamma::new(0.5 * df, 2.0).expect("positive degrees of freedom");
        self.rng.sample(gamma)
    }
}

/// Draws `Sigma ~ inverse-Wishart(psi, nu)`: a Wishart(psi^{-1}, nu) draw
/// via the Bartlett decomposition, inverted.
pub fn sample_inverse_wishart(
    psi: &SymmetricMatrix,
    nu: f64,
    rng: &mut RandomSource,
) -> Result<SymmetricMatrix> {
    let d = psi.dim();
    if !nu.is_finite() || nu <= d as f64 - 1.0 {
        return Err(Error::Domain(format!(
            "inverse-Wishart requires nu > d - 1 = {}, got {nu}",
            d as f64 - 1.0
        )));
    }
    let scale_factor = psi.inverse()?.cholesky()?;

    // Bartlett lower triangle: chi-distributed diagonal, standard-normal
    // strict lower part.
    let mut bartlett = vec![0.0; d * d];
    for i in 0..d {
        bartlett[i * d + i] = rng.chi_square(nu - i as f64).sqrt();
        for j in 0..i {
            bartlett[i * d + j] = rng.standard_normal();
        }
    }

    // The Wishart draw W = (A B)(A B)', so A B is its Cholesky factor and
    // Sigma = W^{-1} comes straight from triangular solves.
    let a = scale_factor.lower();
    let mut w_lower = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = 0.0;
            for k in j..=i {
                s += a[i * d + k] * bartlett[k * d + j];
            }
            w_lower[i * d + j] = s;
        }
    }
    let w_chol = CholeskyFactor::from_lower(d, w_lower)?;
    Ok(w_chol.inverse())
}

/// Draws `(mu, Sigma)` jointly: `Sigma ~ IW(psi, nu)`, then
/// `mu ~ Normal(mu0, Sigma / lambda)`.
pub fn sample_niw(p: &StandardParams, rng: &mut RandomSource) -> Result<(Vec<f64>, SymmetricMatrix)> {
    let d = p.dim();
    let sigma = sample_inverse_wishart(p.psi(), p.nu(), rng)?;
    let chol = sigma.scale(1.0 / p.lambda()).cholesky()?;
    let z: Vec<f64> = (0..d).map(|_| rng.standard_normal()).collect();
    let mut mu = chol.mul_vec(&z)?;
    for (m, c) in mu.iter_mut().zip(p.mu0()) {
        *m += c;
    }
    Ok((mu, sigma))
}

/// Componentwise mean and standard error of the sufficient statistic over
/// `n` draws. Both blocks share the shape of the mean parameterization.
#[derive(Debug, Clone)]
pub struct MomentEstimate {
    pub mean: SufficientStats,
    pub standard_error: SufficientStats,
    pub n_samples: usize,
}

/// Averages `s(mu, Sigma)` over `n >= 2` draws, reporting the sample mean
/// and the standard error (sample standard deviation over sqrt(n)) per
/// component.
pub fn mc_mean_sufficient_stats(
    p: &StandardParams,
    n: usize,
    rng: &mut RandomSource,
) -> Result<MomentEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples to estimate a standard error, got {n}"
        )));
    }
    let d = p.dim();
    let blocks = d * d + d + 2;
    let mut sum = vec![0.0; blocks];
    let mut sum_sq = vec![0.0; blocks];

    for _ in 0..n {
        let (mu, sigma) = sample_niw(p, rng)?;
        let s = sufficient_statistic(&mu, &sigma)?;
        let flat = s
            .s1
            .as_slice()
            .iter()
            .copied()
            .chain(s.s2.iter().copied())
            .chain([s.s3, s.s4]);
        for (acc, v) in sum.iter_mut().zip(flat.clone()) {
            *acc += v;
        }
        for (acc, v) in sum_sq.iter_mut().zip(flat) {
            *acc += v * v;
        }
    }

    let nf = n as f64;
    let mean: Vec<f64> = sum.iter().map(|s| s / nf).collect();
    let se: Vec<f64> = sum_sq
        .iter()
        .zip(&mean)
        .map(|(sq, m)| {
            let var = ((sq - nf * m * m) / (nf - 1.0)).max(0.0);
            (var / nf).sqrt()
        })
        .collect();

    Ok(MomentEstimate {
        mean: SufficientStats {
            s1: SymmetricMatrix::unvec(&mean[..d * d], d)?,
            s2: mean[d * d..d * d + d].to_vec(),
            s3: mean[blocks - 2],
            s4: mean[blocks - 1],
        },
        standard_error: SufficientStats {
            s1: SymmetricMatrix::unvec(&se[..d * d], d)?,
            s2: se[d * d..d * d + d].to_vec(),
            s3: se[blocks - 2],
            s4: se[blocks - 1],
        },
        n_samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_psi(v: f64) -> SymmetricMatrix {
        SymmetricMatrix::new(1, vec![v]).unwrap()
    }

    #[test]
    fn fixed_seed_reproduces_the_stream() {
        let p = StandardParams::new(vec![0.5], 2.0, scalar_psi(1.5), 4.0).unwrap();
        let mut a = RandomSource::from_seed(42);
        let mut b = RandomSource::from_seed(42);
        for _ in 0..50 {
            let (mu_a, sig_a) = sample_niw(&p, &mut a).unwrap();
            let (mu_b, sig_b) = sample_niw(&p, &mut b).unwrap();
            assert_eq!(mu_a, mu_b);
            assert_eq!(sig_a, sig_b);
        }
    }

    #[test]
    fn inverse_wishart_mean_matches_moment_formula() {
        // E[Sigma] = psi / (nu - d - 1); scalar cases with nu = 5
        for (psi_val, want) in [(1.0, 1.0 / 3.0), (2.0, 2.0 / 3.0)] {
            let psi = scalar_psi(psi_val);
            let mut rng = RandomSource::from_seed(7);
            let n = 100_000;
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..n {
                let s = sample_inverse_wishart(&psi, 5.0, &mut rng).unwrap();
                sum += s.get(0, 0);
                sum_sq += s.get(0, 0) * s.get(0, 0);
            }
            let mean = sum / n as f64;
            let var = (sum_sq - n as f64 * mean * mean) / (n as f64 - 1.0);
            let se = (var / n as f64).sqrt();
            assert!(
                (mean - want).abs() <= 4.0 * se,
                "psi={psi_val}: mean {mean}, want {want}, se {se}"
            );
        }
    }

    #[test]
    fn every_draw_is_positive_definite() {
        let psi = SymmetricMatrix::new(2, vec![2.0, 0.5, 0.5, 1.0]).unwrap();
        let mut rng = RandomSource::from_seed(3);
        for _ in 0..500 {
            let s = sample_inverse_wishart(&psi, 2.5, &mut rng).unwrap();
            assert!(s.cholesky().is_ok());
        }
    }

    #[test]
    fn location_mean_and_lambda_scaling() {
        let n = 20_000;
        let psi = scalar_psi(1.0);
        let p1 = StandardParams::new(vec![1.5], 1.0, psi.clone(), 6.0).unwrap();
        let p4 = StandardParams::new(vec![1.5], 4.0, psi, 6.0).unwrap();

        let stats = |p: &StandardParams, seed: u64| {
            let mut rng = RandomSource::from_seed(seed);
            let (mut sum, mut sum_sq) = (0.0, 0.0);
            for _ in 0..n {
                let (mu, _) = sample_niw(p, &mut rng).unwrap();
                sum += mu[0];
                sum_sq += mu[0] * mu[0];
            }
            let mean = sum / n as f64;
            let var = (sum_sq - n as f64 * mean * mean) / (n as f64 - 1.0);
            (mean, var.sqrt())
        };

        let (mean1, std1) = stats(&p1, 11);
        let (_, std4) = stats(&p4, 12);

        // mu centers on mu0; Var(mu) = E[Sigma]/lambda = 1/(3 lambda)
        let se = std1 / (n as f64).sqrt();
        assert!((mean1 - 1.5).abs() <= 4.0 * se, "mean {mean1}");
        // quadrupling lambda halves the spread
        let ratio = std4 / std1;
        assert!((ratio - 0.5).abs() <= 0.05 * 0.5, "ratio {ratio}");
    }

    #[test]
    fn mc_estimate_matches_scalar_moments() {
        // E[s1] = -nu/(2 psi) = -2.5 for (0, 1, 1, 5); E[s2] = 0
        let p = StandardParams::new(vec![0.0], 1.0, scalar_psi(1.0), 5.0).unwrap();
        let mut rng = RandomSource::from_seed(99);
        let est = mc_mean_sufficient_stats(&p, 200_000, &mut rng).unwrap();
        let m = est.mean.s1.get(0, 0);
        let se = est.standard_error.s1.get(0, 0);
        assert!((m + 2.5).abs() <= 4.0 * se, "s1 mean {m}, se {se}");
        assert!(
            est.mean.s2[0].abs() <= 4.0 * est.standard_error.s2[0],
            "s2 mean {}",
            est.mean.s2[0]
        );
    }

    #[test]
    fn mc_estimate_needs_two_samples() {
        let p = StandardParams::new(vec![0.0], 1.0, scalar_psi(1.0), 5.0).unwrap();
        let mut rng = RandomSource::from_seed(0);
        assert!(matches!(
            mc_mean_sufficient_stats(&p, 1, &mut rng),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn rejects_low_degrees_of_freedom() {
        let psi = SymmetricMatrix::identity(3);
        let mut rng = RandomSource::from_seed(0);
        assert!(matches!(
            sample_inverse_wishart(&psi, 2.0, &mut rng),
            Err(Error::Domain(_))
        ));
    }
}
