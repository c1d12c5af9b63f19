//! Feasibility of the split C = A + B^Gamma with A, B PSD.
//!
//! Finds a point in the intersection of the product cone {(A, B) : A, B PSD}
//! and the affine slice {(A, B) : A + B^Gamma = C} by Douglas-Rachford
//! splitting. The affine projection is closed form: shift both blocks by half
//! the residual (the slice map has the isometry-like structure (A, B) ->
//! A + B^Gamma, and Gamma is an involution). The PSD projection is spectral
//! clipping per block, and the candidate split is exactly that clipped pair,
//! so reported splits are PSD by construction. The method can certify
//! feasibility (small residual) but never infeasibility, hence the oracle
//! built on it returns In or Unknown, never Out.

use crate::error::Result;
use crate::mat::{psd_project, ComplexMatrix};
use crate::verdict::Verdict;

/// Residual below which the split is accepted as exact for desk purposes.
pub const DEC_RESIDUAL_EPS: f64 = 1e-7;

const DEC_MAX_ITERS: usize = 5000;

/// Checkpoint spacing and minimum relative progress of the best residual
/// between checkpoints; anything slower counts as stalled (infeasible inputs
/// plateau at the positive distance to the cone).
const STALL_WINDOW: usize = 400;
const STALL_IMPROVEMENT: f64 = 1e-2;

/// Outcome of the splitting run: the best split found and how hard it was to
/// find.
#[derive(Debug, Clone)]
pub struct DecSplit {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub residual: f64,
    pub iterations: usize,
}

impl DecSplit {
    /// ||C - A - B^Gamma||_F recomputed from scratch.
    pub fn residual_against(&self, c: &ComplexMatrix, n: usize) -> Result<f64> {
        let bg = self.b.partial_transpose(n)?;
        Ok((&(c - &self.a) - &bg).frobenius_norm())
    }
}

/// Runs the Douglas-Rachford iteration on an n^2 x n^2 Hermitian matrix.
///
/// Returns In when some PSD pair reaches residual below [`DEC_RESIDUAL_EPS`]
/// (margin = that residual, small is good), Unknown otherwise with the best
/// residual seen. PSD inputs split as (C, 0) on the first iteration.
pub fn dec_feasible(c: &ComplexMatrix, n: usize) -> Result<(Verdict, DecSplit)> {
    c.expect_square_on_pair(n)?;
    c.expect_hermitian()?;

    let dim = n * n;
    // Driver variable of the splitting; its affine projection is the shadow
    // sequence that converges into the intersection.
    let mut za = c.clone();
    let mut zb = ComplexMatrix::zeros(dim, dim);

    let mut best = DecSplit {
        a: ComplexMatrix::zeros(dim, dim),
        b: ComplexMatrix::zeros(dim, dim),
        residual: f64::INFINITY,
        iterations: 0,
    };
    let mut checkpoint = f64::INFINITY;
    let mut iterations = 0;

    while iterations < DEC_MAX_ITERS {
        iterations += 1;

        // y = P_affine(z): shift both blocks by half the slice residual.
        let r = &(c - &za) - &zb.partial_transpose(n)?;
        let ya = &za + &r.scale(0.5);
        let yb = &zb + &r.partial_transpose(n)?.scale(0.5);

        // p = P_psd(2y - z), the candidate split.
        let pa = psd_project(&(&ya.scale(2.0) - &za))?;
        let pb = psd_project(&(&yb.scale(2.0) - &zb))?;

        let residual = (&(c - &pa) - &pb.partial_transpose(n)?).frobenius_norm();
        if residual < best.residual {
            best = DecSplit {
                a: pa.clone(),
                b: pb.clone(),
                residual,
                iterations,
            };
        }
        if residual < DEC_RESIDUAL_EPS {
            break;
        }

        // z <- z + p - y.
        za = &(&za + &pa) - &ya;
        zb = &(&zb + &pb) - &yb;

        if iterations % STALL_WINDOW == 0 {
            if best.residual > checkpoint * (1.0 - STALL_IMPROVEMENT) {
                break;
            }
            checkpoint = best.residual;
        }
    }

    best.iterations = iterations;
    let verdict = if best.residual < DEC_RESIDUAL_EPS {
        Verdict::decided_in(best.residual)
    } else {
        Verdict::unknown(best.residual)
    };
    Ok((verdict, best))
}
