//! Choi-matrix calculus: representation of Hermiticity-preserving maps on
//! B(H), their adjoints and transpose conjugates, composition, Kraus
//! extraction, and the correspondence between maps and linear functionals on
//! B(H (x) H).
//!
//! A map phi is stored solely by its Choi matrix
//! C_phi = sum_ij e_ij (x) phi(e_ij); every criterion the library evaluates is
//! Choi-side, and function-valued constructors are materialized immediately.
//! Only Hermiticity-preserving maps are representable: constructors reject a
//! non-Hermitian Choi matrix with an explicit error.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mat::{cr, hermitian_eig, is_psd, ComplexMatrix};
use crate::verdict::Tolerance;

/// Tolerance for the random-pair linearity spot check in [`QuantumMap::from_action`].
const LINEARITY_EPS: f64 = 1e-8;

/// Relative eigenvalue cutoff for rank detection in Kraus extraction.
const KRAUS_RANK_CUTOFF: f64 = 1e-10;

/// A Hermiticity-preserving linear map on B(H), dim H = n, stored by its
/// Choi matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumMap {
    n: usize,
    choi: ComplexMatrix,
}

impl QuantumMap {
    /// Wraps an n^2 x n^2 Hermitian Choi matrix.
    pub fn from_choi(n: usize, choi: ComplexMatrix) -> Result<Self> {
        choi.expect_square_on_pair(n)?;
        choi.expect_hermitian()?;
        Ok(QuantumMap { n, choi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choi(&self) -> &ComplexMatrix {
        &self.choi
    }

    pub fn into_choi(self) -> ComplexMatrix {
        self.choi
    }

    /// Assembles the Choi matrix of `action` by evaluating it on all matrix
    /// units, then spot-checks linearity on random pairs (complex scalars, so
    /// antilinear actions are caught).
    pub fn from_action(n: usize, action: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        let mut choi = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let out = action(&ComplexMatrix::matrix_unit(n, i, j));
                if out.rows() != n || out.cols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "action returned {} x {}, expected {n} x {n}",
                        out.rows(),
                        out.cols()
                    )));
                }
                for p in 0..n {
                    for q in 0..n {
                        choi.set(i * n + p, j * n + q, out.get(p, q));
                    }
                }
            }
        }

        // Deterministic pseudo-random pairs; independent of caller seeds so
        // construction stays a pure function of the action.
        let mut rng = crate::rng::rng_from_seed(0x51EC_AF5E);
        for _ in 0..3 {
            let a = crate::rng::ginibre(n, n, &mut rng);
            let b = crate::rng::ginibre(n, n, &mut rng);
            let s = crate::rng::complex_gaussian(&mut rng);
            let lhs = action(&(&a + &b.scale_c(s)));
            let rhs = &action(&a) + &action(&b).scale_c(s);
            let scale = lhs.frobenius_norm().max(rhs.frobenius_norm()).max(1.0);
            let dev = lhs.max_abs_diff(&rhs);
            if dev > LINEARITY_EPS * scale {
                return Err(Error::NonlinearAction(dev));
            }
        }
        Self::from_choi(n, choi)
    }

    /// The identity map: Choi matrix sum_ij e_ij (x) e_ij.
    pub fn identity(n: usize) -> Self {
        QuantumMap {
            n,
            choi: ComplexMatrix::maximally_entangled(n),
        }
    }

    /// The transpose map x -> x^T: Choi matrix SWAP.
    pub fn transpose(n: usize) -> Self {
        QuantumMap {
            n,
            choi: ComplexMatrix::swap_operator(n),
        }
    }

    /// The completely depolarizing channel x -> Tr(x) I/n: Choi matrix I/n.
    pub fn depolarizing(n: usize) -> Self {
        QuantumMap {
            n,
            choi: ComplexMatrix::identity(n * n).scale(1.0 / n as f64),
        }
    }

    /// The reduction map x -> Tr(x) I - x: Choi matrix I - C_identity.
    /// Positive but not completely positive for n >= 2.
    pub fn reduction(n: usize) -> Self {
        let choi = &ComplexMatrix::identity(n * n) - &ComplexMatrix::maximally_entangled(n);
        QuantumMap { n, choi }
    }

    /// The classic positive indecomposable map on 3 x 3 matrices:
    /// diagonal of the output is (x00 + x22, x11 + x00, x22 + x11), off-diagonal
    /// entries are negated. Positive but neither completely positive nor
    /// copositive, and not a CP + co-CP sum.
    pub fn cyclic_three(n: usize) -> Result<Self> {
        if n != 3 {
            return Err(Error::Unsupported(
                "cyclic_three is defined on 3 x 3 matrices only".into(),
            ));
        }
        Self::from_action(3, |x| {
            ComplexMatrix::from_fn(3, 3, |i, j| {
                if i == j {
                    x.get(i, i) + x.get((i + 2) % 3, (i + 2) % 3)
                } else {
                    -x.get(i, j)
                }
            })
        })
    }

    /// AdV: x -> V* x V. The Choi matrix is the rank-one projector
    /// |w><w| with w the row-major vectorization of conj(V).
    pub fn ad(v: &ComplexMatrix) -> Result<Self> {
        if !v.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "AdV needs square V, got {} x {}",
                v.rows(),
                v.cols()
            )));
        }
        let n = v.rows();
        let w: Vec<Complex64> = (0..n * n).map(|k| v.get(k / n, k % n).conj()).collect();
        let choi = ComplexMatrix::outer(&w, &w);
        Ok(QuantumMap { n, choi })
    }

    /// phi(x) = sum_ij x_ij phi(e_ij), read straight off the Choi blocks.
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "apply expects {n} x {n}, got {} x {}",
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let coeff = x.get(i, j);
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for p in 0..n {
                    for q in 0..n {
                        let v = out.get(p, q) + coeff * self.choi.get(i * n + p, j * n + q);
                        out.set(p, q, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// The Hilbert-Schmidt adjoint phi*, with Tr(phi(a) b) = Tr(a phi*(b)):
    /// Choi matrix J C_phi J.
    pub fn adjoint(&self) -> Self {
        let choi = self.choi.conj_j(self.n).expect("choi dimensions are valid");
        QuantumMap { n: self.n, choi }
    }

    /// The transpose conjugation phi^t = t o phi o t: Choi matrix C_phi^T.
    pub fn t_conjugate(&self) -> Self {
        QuantumMap {
            n: self.n,
            choi: self.choi.transpose(),
        }
    }

    /// Composition self o other (apply `other` first).
    pub fn compose(&self, other: &QuantumMap) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "composing maps on dim {} and {}",
                self.n, other.n
            )));
        }
        Self::from_action(self.n, |x| {
            let mid = other.apply(x).expect("dimensions checked");
            self.apply(&mid).expect("dimensions checked")
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        QuantumMap {
            n: self.n,
            choi: self.choi.scale(s),
        }
    }

    pub fn add(&self, other: &QuantumMap) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "adding maps on dim {} and {}",
                self.n, other.n
            )));
        }
        Ok(QuantumMap {
            n: self.n,
            choi: &self.choi + &other.choi,
        })
    }

    /// Kraus operators V_k with phi(x) = sum_k V_k* x V_k, from the
    /// eigendecomposition of the Choi matrix. Requires a PSD Choi matrix;
    /// eigenvalues below `1e-10 * lambda_max` are treated as rank noise.
    pub fn kraus(&self, tol: &Tolerance) -> Result<Vec<ComplexMatrix>> {
        let verdict = is_psd(&self.choi, tol)?;
        if verdict.is_out() {
            return Err(Error::NotPsd {
                min_eigenvalue: verdict.margin,
                witness: Box::new(verdict.certificate.expect("out carries certificate")),
            });
        }
        let e = hermitian_eig(&self.choi)?;
        let lam_max = e.max_eigenvalue().max(0.0);
        let cutoff = KRAUS_RANK_CUTOFF * lam_max;
        let n = self.n;
        let mut ops = Vec::new();
        for (lam, vec) in e.eigenvalues.iter().zip(e.eigenvectors.iter()) {
            if *lam <= cutoff || *lam <= 0.0 {
                continue;
            }
            let s = lam.sqrt();
            // C = sum_k |w_k><w_k| with w_k = sqrt(lam_k) v_k demands
            // V_k[i][p] = conj(w_k[(i,p)]).
            let v = ComplexMatrix::from_fn(n, n, |i, p| (vec[i * n + p] * cr(s)).conj());
            ops.push(v);
        }
        Ok(ops)
    }

    /// (iota (x) self)(x) for x on H (x) H: applies the map to every block.
    pub fn apply_id_tensor(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        x.expect_square_on_pair(n)?;
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                let block = ComplexMatrix::from_fn(n, n, |p, q| x.get(i * n + p, j * n + q));
                let mapped = self.apply(&block)?;
                for p in 0..n {
                    for q in 0..n {
                        out.set(i * n + p, j * n + q, mapped.get(p, q));
                    }
                }
            }
        }
        Ok(out)
    }
}

impl Serialize for QuantumMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            choi: &'a ComplexMatrix,
        }
        Wire {
            n: self.n,
            choi: &self.choi,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuantumMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            choi: ComplexMatrix,
        }
        let w = Wire::deserialize(deserializer)?;
        QuantumMap::from_choi(w.n, w.choi).map_err(D::Error::custom)
    }
}

/// A linear functional rho on B(H (x) H), carried by its density operator h:
/// rho(x) = Tr(h x). The `is_state` flag records whether h is PSD with unit
/// trace.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional {
    n: usize,
    density: ComplexMatrix,
    is_state: bool,
}

const STATE_TRACE_EPS: f64 = 1e-9;

impl StateFunctional {
    /// Wraps an n^2 x n^2 Hermitian density operator; the state flag is
    /// computed, not trusted.
    pub fn new(n: usize, density: ComplexMatrix) -> Result<Self> {
        density.expect_square_on_pair(n)?;
        density.expect_hermitian()?;
        let is_state = (density.trace().re - 1.0).abs() <= STATE_TRACE_EPS
            && is_psd(&density, &Tolerance::default())?.is_in();
        Ok(StateFunctional {
            n,
            density,
            is_state,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.density
    }

    pub fn is_state(&self) -> bool {
        self.is_state
    }

    /// rho(x) = Tr(h x); real for Hermitian arguments, which is all the
    /// library evaluates.
    pub fn evaluate(&self, x: &ComplexMatrix) -> Result<f64> {
        Ok(self.density.hs_pair(x)?.re)
    }

    /// Fresh functional with the same density scaled to unit trace.
    /// Errors when the trace is not safely positive.
    pub fn normalized(&self) -> Result<Self> {
        let t = self.density.trace().re;
        if t <= STATE_TRACE_EPS {
            return Err(Error::NotState(format!(
                "density trace {t:.3e} is not positive"
            )));
        }
        StateFunctional::new(self.n, self.density.scale(1.0 / t))
    }
}

impl Serialize for StateFunctional {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            n: usize,
            density: &'a ComplexMatrix,
            is_state: bool,
        }
        Wire {
            n: self.n,
            density: &self.density,
            is_state: self.is_state,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateFunctional {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            n: usize,
            density: ComplexMatrix,
            is_state: bool,
        }
        let w = Wire::deserialize(deserializer)?;
        let sf = StateFunctional::new(w.n, w.density).map_err(D::Error::custom)?;
        if w.is_state && !sf.is_state {
            return Err(D::Error::custom(
                "file claims is_state but the density is not a PSD unit-trace operator",
            ));
        }
        Ok(sf)
    }
}

/// The functional associated with a map: density operator C_phi^T, so that
/// rho(a (x) b) = Tr(phi(a) b^T).
pub fn functional_of_map(phi: &QuantumMap) -> StateFunctional {
    let density = phi.choi().transpose();
    let is_state = (density.trace().re - 1.0).abs() <= STATE_TRACE_EPS
        && is_psd(&density, &Tolerance::default())
            .map(|v| v.is_in())
            .unwrap_or(false);
    StateFunctional {
        n: phi.n(),
        density,
        is_state,
    }
}

/// Inverse correspondence: the map whose Choi matrix is the transposed
/// density. Exact entry permutation; round-trips with [`functional_of_map`].
pub fn map_of_functional(rho: &StateFunctional) -> QuantumMap {
    QuantumMap {
        n: rho.n(),
        choi: rho.density().transpose(),
    }
}

/// pi(sum_ij e_ij (x) X_ij) = sum_ij X_ij^T e_ij; on product tensors
/// pi(a (x) b) = b^T a.
pub fn pi_contract(x: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    x.expect_square_on_pair(n)?;
    let mut out = ComplexMatrix::zeros(n, n);
    for p in 0..n {
        for q in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            // (X_iq^T e_iq)_{pq} contributes X_iq[i, p] at column q.
            for i in 0..n {
                acc += x.get(i * n + i, q * n + p);
            }
            out.set(p, q, acc);
        }
    }
    Ok(out)
}
