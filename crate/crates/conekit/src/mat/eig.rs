//! Hermitian eigendecomposition with a residual post-check.
//!
//! Backend contract: eigenpairs must satisfy ||Xv - lambda v|| <=
//! 1e-12 * max(1, ||X||_F) per pair; violations surface as
//! [`Error::EigenFailed`] rather than silently poisoning downstream verdicts.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const RESIDUAL_BOUND: f64 = 1e-12;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, `eigenvectors[k]` paired with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl HermitianEig {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn min_eigenvector(&self) -> &[Complex64] {
        &self.eigenvectors[0]
    }

    /// Reassembles sum_k f(lambda_k) v_k v_k^dagger.
    pub fn assemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvectors[0].len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, v) in self.eigenvectors.iter().enumerate() {
            let w = f(self.eigenvalues[k]);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let add = Complex64::new(w, 0.0) * v[i] * v[j].conj();
                    out.set(i, j, out.get(i, j) + add);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of `x` after exact Hermitization (x + x^dagger)/2.
/// Callers gate Hermiticity separately; the averaging only removes roundoff.
pub fn hermitian_eig(x: &ComplexMatrix) -> Result<HermitianEig> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {} x {} matrix",
            x.rows(),
            x.cols()
        )));
    }
    let n = x.rows();
    let h = (x + &x.dagger()).scale(0.5);
    let m = DMatrix::<Complex64>::from_fn(n, n, |i, j| h.get(i, j));
    let se = m.clone().symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(se.eigenvalues[k]);
        eigenvectors.push(se.eigenvectors.column(k).iter().copied().collect::<Vec<_>>());
    }

    let scale = h.frobenius_norm().max(1.0);
    for (lam, v) in eigenvalues.iter().zip(eigenvectors.iter()) {
        let hv = h.mul_vec(v);
        let res: f64 = hv
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b * Complex64::new(*lam, 0.0)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if res > RESIDUAL_BOUND * scale {
            return Err(Error::EigenFailed(res));
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}
