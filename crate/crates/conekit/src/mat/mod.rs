//! Dense complex-matrix kernel.
//!
//! Everything in the library is carried by [`ComplexMatrix`]: operators on H,
//! operators on H (x) H, Choi matrices, and column vectors. Storage is
//! row-major `Complex<f64>`, fixed so the JSON wire format
//! `{"rows": r, "cols": c, "data": [[re, im], ...]}` is bit-exact.
//!
//! Operators on a tensor square H (x) H of an n-dimensional space use the
//! composite index `(i, j) -> i * n + j`: block (i, j) of such a matrix is the
//! n x n matrix at block-row i, block-column j, so that `e_ij (x) X` places X
//! at block (i, j).

mod blockpos;
mod eig;
mod psd;

pub use blockpos::{is_block_positive, max_product_expectation, min_product_expectation, ProductOptimum};
pub use eig::{hermitian_eig, HermitianEig};
pub use psd::{is_psd, psd_project};

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Scale-aware Hermiticity slack: values within `1e-12 * max(1, ||X||_F)`
/// entrywise of their mirror count as Hermitian.
pub const HERMITIAN_SLACK: f64 = 1e-12;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Dense row-major complex matrix, the universal carrier of the library.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, cr(1.0));
        }
        m
    }

    /// Matrix unit e_ij (1 at row i, column j) in B(H) with dim H = n.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n);
        let mut m = Self::zeros(n, n);
        m.set(i, j, cr(1.0));
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidData(format!(
                "expected {rows} x {cols} = {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Column vector from a slice of amplitudes.
    pub fn column(v: &[Complex64]) -> Self {
        ComplexMatrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Rank-one |u><v|.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square()
            && self.hermitian_deviation() <= HERMITIAN_SLACK * self.frobenius_norm().max(1.0)
    }

    pub(crate) fn expect_hermitian(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{} x {} matrix is not square",
                self.rows, self.cols
            )));
        }
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_SLACK * self.frobenius_norm().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(())
    }

    /// Checks that the matrix is n^2 x n^2 for the given factor dimension n.
    pub(crate) fn expect_square_on_pair(&self, n: usize) -> Result<()> {
        if self.rows != n * n || self.cols != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0} x {0} (n = {n}), got {1} x {2}",
                n * n,
                self.rows,
                self.cols
            )));
        }
        Ok(())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_c(cr(s))
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Kronecker product; `e_ij.tensor(x)` places `x` at block (i, j).
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = ComplexMatrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols
            {
                let a = self.get(i, j);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out.set(i * other.rows + p, j * other.cols + q, a * other.get(p, q));
                    }
                }
            }
        }
        out
    }

    /// Partial transpose on the second tensor factor: block (i, j) of the
    /// result is the transpose of block (i, j) of the input. A pure entry
    /// permutation, hence an exact involution.
    pub fn partial_transpose(&self, n: usize) -> Result<ComplexMatrix> {
        self.expect_square_on_pair(n)?;
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for p in 0..n {
                    for q in 0..n {
                        out.set(i * n + p, j * n + q, self.get(i * n + q, j * n + p));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Conjugation X -> JXJ by the antilinear involution
    /// J(z e_i (x) e_j) = conj(z) e_j (x) e_i, as the entry map
    /// (JXJ)_{(ab),(cd)} = conj(X_{(ba),(dc)}).
    pub fn conj_j(&self, n: usize) -> Result<ComplexMatrix> {
        self.expect_square_on_pair(n)?;
        let mut out = ComplexMatrix::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                for cc in 0..n {
                    for d in 0..n {
                        out.set(a * n + b, cc * n + d, self.get(b * n + a, d * n + cc).conj());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Bilinear trace pairing Tr(AB). Real for Hermitian A, B.
    pub fn hs_pair(&self, other: &ComplexMatrix) -> Result<Complex64> {
        if !self.is_square() || self.rows != other.rows || !other.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "hs_pair needs equal square dimensions, got {} x {} and {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // Tr(AB) = sum_ij A_ij B_ji
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..self.rows {
            for j in 0..self.cols {
                acc += self.get(i, j) * other.get(j, i);
            }
        }
        Ok(acc)
    }

    /// The swap operator on H (x) H: SWAP = sum_ij e_ij (x) e_ji.
    pub fn swap_operator(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i * n + j, j * n + i, cr(1.0));
            }
        }
        m
    }

    /// The unnormalized maximally entangled projector sum_ij e_ij (x) e_ij,
    /// equal to |Omega><Omega| with Omega = sum_i e_i (x) e_i.
    pub fn maximally_entangled(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                m.set(i * n + i, j * n + j, cr(1.0));
            }
        }
        m
    }

    /// Unit vector Omega-hat = (1/sqrt(n)) sum_i e_i (x) e_i.
    pub fn maximally_entangled_vector(n: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        let a = 1.0 / (n as f64).sqrt();
        for i in 0..n {
            v[i * n + i] = cr(a);
        }
        v
    }

    /// Projector onto the antisymmetric subspace of H (x) H: (I - SWAP)/2.
    pub fn antisymmetric_projector(n: usize) -> ComplexMatrix {
        let id = ComplexMatrix::identity(n * n);
        (&id - &ComplexMatrix::swap_operator(n)).scale(0.5)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (a, x) in row.iter().zip(v.iter()) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// <u|X|v> with the physics convention (u conjugated).
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let xv = self.mul_vec(v);
        u.iter().zip(xv.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Maximum entrywise modulus of the difference.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(rhs.data.iter()).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(rhs.data.iter()).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "mul dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self.get(i, j);
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// Wire format: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
            #[serde(skip)]
            _marker: std::marker::PhantomData<&'a ()>,
        }
        let wire = Wire {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| [z.re, z.im]).collect(),
            _marker: std::marker::PhantomData,
        };
        wire.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            rows: usize,
            cols: usize,
            data: Vec<[f64; 2]>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let data: Vec<Complex64> = wire.data.iter().map(|p| c(p[0], p[1])).collect();
        ComplexMatrix::from_data(wire.rows, wire.cols, data).map_err(D::Error::custom)
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalizes a complex vector in place; returns false for (near-)zero input.
pub fn normalize_vec(v: &mut [Complex64]) -> bool {
    let n = vec_norm(v);
    if n < 1e-300 {
        return false;
    }
    for z in v.iter_mut() {
        *z /= n;
    }
    true
}

/// <u|v> with u conjugated.
pub fn vec_inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Kronecker product of two vectors: (u (x) v)_{(i,j)} = u_i v_j.
pub fn vec_tensor(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for a in u {
        for b in v {
            out.push(a * b);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(m: &ComplexMatrix, expected: &ComplexMatrix, tol: f64) {
        assert!(
            m.max_abs_diff(expected) <= tol,
            "matrices differ by {:.3e}:\n{m}\nvs\n{expected}",
            m.max_abs_diff(expected)
        );
    }

    #[test]
    fn tensor_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert_close(&i2.tensor(&i2), &ComplexMatrix::identity(4), 0.0);
    }

    #[test]
    fn tensor_matrix_units() {
        let e00 = ComplexMatrix::matrix_unit(2, 0, 0);
        let t = e00.tensor(&e00);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected.set(0, 0, cr(1.0));
        assert_close(&t, &expected, 0.0);
    }

    #[test]
    fn unit_sum_tensor_expansion() {
        // sum_ij e_ij (x) e_ij at n = 2: ones at (0,0), (0,3), (3,0), (3,3).
        let mut acc = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                let e = ComplexMatrix::matrix_unit(2, i, j);
                acc = &acc + &e.tensor(&e);
            }
        }
        let mut expected = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            expected.set(i, j, cr(1.0));
        }
        assert_close(&acc, &expected, 0.0);
        assert_close(&acc, &ComplexMatrix::maximally_entangled(2), 0.0);
    }

    #[test]
    fn partial_transpose_product_case() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 - j as f64, (i * j) as f64));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(0.5 * i as f64, 1.0 + j as f64));
        let pt = a.tensor(&b).partial_transpose(3).unwrap();
        assert_close(&pt, &a.tensor(&b.transpose()), 0.0);
    }

    #[test]
    fn partial_transpose_swap_gives_entangled_projector() {
        let pt = ComplexMatrix::swap_operator(2).partial_transpose(2).unwrap();
        assert_close(&pt, &ComplexMatrix::maximally_entangled(2), 0.0);
    }

    #[test]
    fn partial_transpose_is_exact_involution() {
        let x = ComplexMatrix::from_fn(9, 9, |i, j| c((i * 17 + j) as f64, (i as f64) - 0.3 * j as f64));
        let back = x.partial_transpose(3).unwrap().partial_transpose(3).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn partial_transpose_dimension_error() {
        let x = ComplexMatrix::zeros(3, 3);
        assert!(x.partial_transpose(2).is_err());
    }

    #[test]
    fn conj_j_fixes_identity_and_entangled_projector() {
        let id = ComplexMatrix::identity(9);
        assert_close(&id.conj_j(3).unwrap(), &id, 0.0);
        // C for the identity map is J-invariant: the identity map is self-adjoint.
        let m = ComplexMatrix::maximally_entangled(3);
        assert_close(&m.conj_j(3).unwrap(), &m, 0.0);
    }

    #[test]
    fn conj_j_equals_swap_conjugated_conjugate() {
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64 + 0.25, j as f64 - 1.5));
        let s = ComplexMatrix::swap_operator(2);
        let expected = &(&s * &x.conj()) * &s;
        assert_close(&x.conj_j(2).unwrap(), &expected, 1e-14);
    }

    #[test]
    fn conj_j_is_involution() {
        let x = ComplexMatrix::from_fn(9, 9, |i, j| c((i + 2 * j) as f64 * 0.1, (i as f64).sin()));
        let back = x.conj_j(3).unwrap().conj_j(3).unwrap();
        assert!(back.max_abs_diff(&x) <= 1e-14);
    }

    #[test]
    fn conj_j_trace_is_conjugated() {
        let x = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64 * 0.7, j as f64 - 0.2));
        let t = x.conj_j(2).unwrap().trace();
        let expected = x.trace().conj();
        assert!((t - expected).norm() <= 1e-14);
    }

    #[test]
    fn hs_pair_frozen_contractions() {
        // Index bookkeeping oracle: Tr(C_iota C_t) = sum over matching units = n.
        for n in [2usize, 3] {
            let ent = ComplexMatrix::maximally_entangled(n);
            let swap = ComplexMatrix::swap_operator(n);
            let p = ent.hs_pair(&swap).unwrap();
            assert!((p - cr(n as f64)).norm() <= 1e-14, "n = {n}: {p}");
            let q = ent.hs_pair(&ent).unwrap();
            assert!((q - cr((n * n) as f64)).norm() <= 1e-14);
            let id = ComplexMatrix::identity(n * n);
            let r = id.hs_pair(&id).unwrap();
            assert!((r - cr((n * n) as f64)).norm() <= 1e-14);
        }
    }

    #[test]
    fn hs_pair_symmetry() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c(i as f64, j as f64 * 0.3));
        let b = ComplexMatrix::from_fn(4, 4, |i, j| c((i * j) as f64, -1.0));
        let ab = a.hs_pair(&b).unwrap();
        let ba = b.hs_pair(&a).unwrap();
        assert!((ab - ba).norm() <= 1e-12);
    }

    #[test]
    fn hs_pair_dimension_error() {
        let a = ComplexMatrix::zeros(2, 2);
        let b = ComplexMatrix::zeros(3, 3);
        assert!(a.hs_pair(&b).is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let x = ComplexMatrix::from_fn(3, 2, |i, j| c(1.0 / (i + 1) as f64, (j as f64).sqrt()));
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.starts_with(r#"{"rows":3,"cols":2,"data":[["#));
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn json_rejects_bad_length() {
        let s = r#"{"rows": 2, "cols": 2, "data": [[1.0, 0.0]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(s).is_err());
    }

    #[test]
    fn hermitian_deviation_detects_skew() {
        let mut x = ComplexMatrix::identity(2);
        x.set(0, 1, c(0.0, 1.0));
        x.set(1, 0, c(0.0, 1.0)); // conj would need -i
        assert!(x.hermitian_deviation() > 1.0);
        assert!(!x.is_hermitian());
    }
}
