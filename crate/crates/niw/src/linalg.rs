//! Minimal dense symmetric linear algebra for small matrices.
//!
//! Everything here targets dimensions in the tens at most: dense row-major
//! storage, unblocked Cholesky, and solves by forward/back substitution.
//! "Positive definite" is defined operationally as "Cholesky succeeds with
//! every pivot strictly positive".

use crate::error::{Error, Result};

/// Relative asymmetry above which [`SymmetricMatrix::unvec_checked`] rejects
/// its input as a data error rather than symmetrizing it away.
const ASYMMETRY_REL_TOL: f64 = 1e-6;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense d-by-d symmetric matrix, row-major.
///
/// Symmetry is structural: constructors either mirror the upper triangle or
/// verify `a[i][j] == a[j][i]` exactly, so `entries[i*d+j] == entries[j*d+i]`
/// always holds bit-for-bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from row-major entries, requiring exact symmetry.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                if data[i * dim + j] != data[j * dim + i] {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i},{j}): {} vs {}",
                        data[i * dim + j],
                        data[j * dim + i]
                    )));
                }
            }
        }
        Ok(Self { dim, data })
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Self { dim, data }
    }

    /// Fills entries from `f(i, j)` for `i <= j` and mirrors the rest.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                data[i * dim + j] = v;
                data[j * dim + i] = v;
            }
        }
        Self { dim, data }
    }

    /// Outer product `u * u'`.
    pub fn outer(u: &[f64]) -> Self {
        Self::from_fn(u.len(), |i, j| u[i] * u[j])
    }

    /// Reshapes a length-d^2 row-major vector and symmetrizes it via
    /// `(X + X')/2`, accepting any amount of asymmetry.
    pub fn unvec(v: &[f64], dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if v.len() != dim * dim {
            return Err(Error::DimMismatch {
                expected: dim * dim,
                got: v.len(),
            });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        Ok(Self::from_fn(dim, |i, j| {
            0.5 * (v[i * dim + j] + v[j * dim + i])
        }))
    }

    /// Like [`SymmetricMatrix::unvec`], but rejects input whose asymmetry
    /// exceeds relative 1e-6. Meant for deserialization boundaries, where
    /// mild rounding noise (e.g. moments accumulated from samples) is fine
    /// but anything larger indicates corrupted data.
    pub fn unvec_checked(v: &[f64], dim: usize) -> Result<Self> {
        let out = Self::unvec(v, dim)?;
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let asym = (v[i * dim + j] - v[j * dim + i]).abs();
                if asym > ASYMMETRY_REL_TOL * scale {
                    return Err(Error::InvalidArgument(format!(
                        "matrix entries are asymmetric beyond relative {ASYMMETRY_REL_TOL:e} at ({i},{j}): {} vs {}",
                        v[i * dim + j],
                        v[j * dim + i]
                    )));
                }
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Row-major flattening; equal to the column-major flattening by symmetry.
    pub fn vec(&self) -> Vec<f64> {
        self.data.clone()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn mul_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| dot(&self.data[i * self.dim..(i + 1) * self.dim], v))
            .collect())
    }

    /// Quadratic form `u' * S * u`.
    pub fn quad_form(&self, u: &[f64]) -> Result<f64> {
        Ok(dot(u, &self.mul_vec(u)?))
    }

    /// Frobenius inner product, `sum_ij A_ij B_ij`; equals `vec(A) . vec(B)`.
    pub fn frob_dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in frob_dot");
        dot(&self.data, &other.data)
    }

    /// Lower Cholesky factor; failure means the matrix is not positive
    /// definite.
    pub fn cholesky(&self) -> Result<CholeskyFactor> {
        let d = self.dim;
        let mut lower = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let mut s = self.data[i * d + j];
                for k in 0..j {
                    s -= lower[i * d + k] * lower[j * d + k];
                }
                if i == j {
                    if !(s > 0.0) || !s.is_finite() {
                        return Err(Error::NotPositiveDefinite { row: i, pivot: s });
                    }
                    lower[i * d + i] = s.sqrt();
                } else {
                    lower[i * d + j] = s / lower[j * d + j];
                }
            }
        }
        Ok(CholeskyFactor { dim: d, lower })
    }

    /// `log |S|` for a positive definite matrix.
    pub fn log_det(&self) -> Result<f64> {
        Ok(self.cholesky()?.log_det())
    }

    /// Solves `S x = b` for positive definite `S`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.cholesky()?.solve(b)
    }

    /// Inverse of a positive definite matrix, symmetrized.
    pub fn inverse(&self) -> Result<SymmetricMatrix> {
        Ok(self.cholesky()?.inverse())
    }
}

/// Lower-triangular Cholesky factor `L` with `L L' = S`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    dim: usize,
    /// Dense row-major storage; entries above the diagonal are zero.
    lower: Vec<f64>,
}

impl CholeskyFactor {
    /// Wraps an existing lower-triangular factor with positive diagonal.
    pub(crate) fn from_lower(dim: usize, lower: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(lower.len(), dim * dim);
        for (i, &piv) in lower.iter().step_by(dim + 1).enumerate().take(dim) {
            if !(piv > 0.0) || !piv.is_finite() {
                return Err(Error::NotPositiveDefinite { row: i, pivot: piv });
            }
        }
        Ok(Self { dim, lower })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major dense lower factor (zeros above the diagonal).
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `log |S| = 2 sum_i log L_ii`.
    pub fn log_det(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.lower[i * self.dim + i].ln())
            .sum::<f64>()
            * 2.0
    }

    /// Solves `S x = b` by forward then back substitution.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim;
        if b.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: b.len(),
            });
        }
        // L z = b
        let mut z = vec![0.0; d];
        for i in 0..d {
            let mut s = b[i];
            for k in 0..i {
                s -= self.lower[i * d + k] * z[k];
            }
            z[i] = s / self.lower[i * d + i];
        }
        // L' x = z
        let mut x = vec![0.0; d];
        for i in (0..d).rev() {
            let mut s = z[i];
            for k in (i + 1)..d {
                s -= self.lower[k * d + i] * x[k];
            }
            x[i] = s / self.lower[i * d + i];
        }
        Ok(x)
    }

    /// `S^{-1}`, symmetrized.
    pub fn inverse(&self) -> SymmetricMatrix {
        let d = self.dim;
        let mut cols = Vec::with_capacity(d);
        let mut e = vec![0.0; d];
        for k in 0..d {
            e[k] = 1.0;
            cols.push(self.solve(&e).expect("unit vector has matching length"));
            e[k] = 0.0;
        }
        SymmetricMatrix::from_fn(d, |i, j| 0.5 * (cols[j][i] + cols[i][j]))
    }

    /// `L z` (used to color standard-normal draws).
    pub fn mul_vec(&self, z: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim;
        if z.len() != d {
            return Err(Error::DimMismatch {
                expected: d,
                got: z.len(),
            });
        }
        Ok((0..d)
            .map(|i| dot(&self.lower[i * d..i * d + i + 1], &z[..i + 1]))
            .collect())
    }
}
