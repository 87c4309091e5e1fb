//! Forward mapping: natural parameters to mean parameters (the expected
//! sufficient statistics, i.e. the gradient of the log partition function).

use crate::error::Result;
use crate::linalg::dot;
use crate::model::{MeanParams, NaturalParams};
use crate::special;

/// Computes the expected sufficient statistics
///
/// ```text
/// m1 = -(nu/2) psi^{-1}
/// m2 = nu psi^{-1} mu0
/// m3 = -d/(2 lambda) - (nu/2) mu0' psi^{-1} mu0
/// m4 = -1/2 log|psi| + (d/2) log 2 + 1/2 sum_{i<d} psi((nu-i)/2)
/// ```
///
/// evaluated through the recovered standard form (one Cholesky of psi).
pub fn mean_from_natural(e: &NaturalParams) -> Result<MeanParams> {
    let p = e.to_standard()?;
    let d = p.dim();
    let chol = p.psi().cholesky()?;
    let psi_inv_mu0 = chol.solve(p.mu0())?;

    let m1 = chol.inverse().scale(-0.5 * p.nu());
    let m2: Vec<f64> = psi_inv_mu0.iter().map(|v| p.nu() * v).collect();
    let m3 = -(d as f64) / (2.0 * p.lambda()) - 0.5 * p.nu() * dot(p.mu0(), &psi_inv_mu0);
    let m4 = -0.5 * chol.log_det()
        + 0.5 * d as f64 * std::f64::consts::LN_2
        + 0.5 * special::digamma_sum(p.nu(), d)?;

    MeanParams::new(m1, m2, m3, m4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymmetricMatrix;
    use crate::model::{log_partition, StandardParams};

    fn assert_rel(got: f64, want: f64, tol: f64) {
        let err = (got - want).abs() / want.abs().max(1.0);
        assert!(err <= tol, "got {got}, want {want}, rel err {err:e}");
    }

    #[test]
    fn worked_scalar_cases() {
        // (mu0, lambda, psi, nu) = (0, 1, 1, 3)
        let p = StandardParams::new(
            vec![0.0],
            1.0,
            SymmetricMatrix::new(1, vec![1.0]).unwrap(),
            3.0,
        )
        .unwrap();
        let m = mean_from_natural(&p.to_natural()).unwrap();
        assert_rel(m.m1().get(0, 0), -1.5, 1e-13);
        assert_eq!(m.m2(), &[0.0]);
        assert_rel(m.m3(), -0.5, 1e-13);
        assert_rel(m.m4(), 0.3648185772692609, 1e-13);

        // (2, 0.5, 1, 2)
        let p = StandardParams::new(
            vec![2.0],
            0.5,
            SymmetricMatrix::new(1, vec![1.0]).unwrap(),
            2.0,
        )
        .unwrap();
        let m = mean_from_natural(&p.to_natural()).unwrap();
        assert_rel(m.m1().get(0, 0), -1.0, 1e-13);
        assert_rel(m.m2()[0], 4.0, 1e-13);
        assert_rel(m.m3(), -5.0, 1e-13);
        assert_rel(m.m4(), 0.057965757829206224, 1e-13);
    }

    #[test]
    fn worked_two_dimensional_case() {
        let p = StandardParams::new(vec![0.0, 0.0], 1.0, SymmetricMatrix::identity(2), 4.0)
            .unwrap();
        let m = mean_from_natural(&p.to_natural()).unwrap();
        assert_eq!(m.m1(), &SymmetricMatrix::identity(2).scale(-2.0));
        assert_eq!(m.m2(), &[0.0, 0.0]);
        assert_rel(m.m3(), -1.0, 1e-13);
        assert_rel(m.m4(), 0.9227843350984671, 1e-13);
    }

    #[test]
    fn output_satisfies_feasibility() {
        // log|-2 m1| - 2 m4 > 0 must hold for every forward image, so the
        // reverse map never sees an infeasible m4 from a valid eta.
        struct TestRng(u64);
        impl TestRng {
            fn next_unit(&mut self) -> f64 {
                self.0 ^= self.0 << 13;
                self.0 ^= self.0 >> 7;
                self.0 ^= self.0 << 17;
                (self.0 >> 11) as f64 / (1u64 << 53) as f64
            }
        }
        let mut rng = TestRng(0x77aa55cc);
        for &d in &[1usize, 2, 3, 5] {
            for _ in 0..25 {
                let psi = SymmetricMatrix::from_fn(d, |i, j| {
                    if i == j {
                        0.2 + 5.0 * rng.next_unit()
                    } else {
                        0.0
                    }
                });
                let mu0: Vec<f64> = (0..d).map(|_| 10.0 * rng.next_unit() - 5.0).collect();
                let lambda = 0.1 + 9.9 * rng.next_unit();
                let nu = d as f64 - 0.9 + 31.0 * rng.next_unit();
                let p = StandardParams::new(mu0, lambda, psi, nu).unwrap();
                let m = mean_from_natural(&p.to_natural()).unwrap();
                let gap = m.m1().scale(-2.0).log_det().unwrap() - 2.0 * m.m4();
                assert!(gap > 0.0, "d={d} nu={nu}: gap={gap}");
            }
        }
    }

    #[test]
    fn matches_finite_differences_of_log_partition() {
        // Smoke-level gradient check here; the acceptance suite runs the
        // full randomized version.
        let p = StandardParams::new(
            vec![1.0, -0.5],
            2.0,
            SymmetricMatrix::new(2, vec![2.0, 0.3, 0.3, 1.0]).unwrap(),
            5.0,
        )
        .unwrap();
        let e = p.to_natural();
        let m = mean_from_natural(&e).unwrap();
        let h = 1e-5;

        // eta3 direction
        let a_plus = log_partition(
            &crate::model::NaturalParams::new(
                e.eta1().clone(),
                e.eta2().to_vec(),
                e.eta3() + h,
                e.eta4(),
            )
            .unwrap(),
        )
        .unwrap();
        let a_minus = log_partition(
            &crate::model::NaturalParams::new(
                e.eta1().clone(),
                e.eta2().to_vec(),
                e.eta3() - h,
                e.eta4(),
            )
            .unwrap(),
        )
        .unwrap();
        let fd = (a_plus - a_minus) / (2.0 * h);
        assert_rel(m.m3(), fd, 1e-5);
    }
}
