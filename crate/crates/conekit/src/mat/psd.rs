//! Spectral positivity test and the PSD-cone projection.

use super::eig::hermitian_eig;
use super::ComplexMatrix;
use crate::error::Result;
use crate::verdict::{Tolerance, Verdict};

/// Decides positive semidefiniteness. In when the minimum eigenvalue clears
/// `-abs_eps * max(1, ||X||_F)`; otherwise Out with the minimizing eigenvector
/// as certificate. Margin is the minimum eigenvalue in both cases; the verdict
/// is never Unknown. Errors on non-Hermitian input.
pub fn is_psd(x: &ComplexMatrix, tol: &Tolerance) -> Result<Verdict> {
    x.expect_hermitian()?;
    let e = hermitian_eig(x)?;
    let lam = e.min_eigenvalue();
    if lam >= -tol.spectral_cutoff(x.frobenius_norm()) {
        Ok(Verdict::decided_in(lam))
    } else {
        let cert = ComplexMatrix::column(e.min_eigenvector());
        Ok(Verdict::decided_out(lam, cert))
    }
}

/// Nearest PSD matrix in Frobenius norm: eigenvalue clipping at zero.
pub fn psd_project(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(x)?;
    Ok(e.assemble(|l| l.max(0.0)))
}
