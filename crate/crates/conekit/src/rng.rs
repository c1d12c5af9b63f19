//! Seeded randomness and the standard random-matrix ensembles.
//!
//! Every randomized routine in the crate takes an explicit `u64` seed and
//! derives per-trial generators through [`trial_seed`], so results are
//! reproducible and independent of evaluation order or concurrency.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::mat::{normalize_vec, ComplexMatrix};

/// The crate-wide deterministic generator.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splitting rule for per-trial seeds: one splitmix64 step of
/// `base + (trial + 1) * golden`, the standard 64-bit mixer. Trials seeded
/// this way are order-independent, so concurrent execution cannot change
/// results.
pub fn trial_seed(base: u64, trial: u64) -> u64 {
    let mut z = base.wrapping_add(trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian with E|z|^2 = 1 (real and imaginary parts
/// independent N(0, 1/2)).
pub fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix: independent standard complex Gaussian entries.
pub fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// GUE-style Hermitian matrix (G + G^dagger)/2 from a Ginibre G.
pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    (&g + &g.dagger()).scale(0.5)
}

/// Wishart PSD matrix G G^dagger with G square Ginibre.
pub fn random_psd<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    &g * &g.dagger()
}

/// Trace-one Wishart density matrix.
pub fn random_density<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let w = random_psd(n, rng);
    let t = w.trace().re;
    w.scale(1.0 / t)
}

/// Haar-ish random unit vector (normalized Gaussian).
pub fn random_unit_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        if normalize_vec(&mut v) {
            return v;
        }
    }
}

/// Random unitary via Gram-Schmidt on Ginibre columns (two passes for
/// numerical orthogonality; exact Haar measure is not needed anywhere).
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = crate::mat::vec_inner(&cols[k], &cols[j]);
                for i in 0..n {
                    let adj = proj * cols[k][i];
                    cols[j][i] -= adj;
                }
            }
        }
        let mut c = std::mem::take(&mut cols[j]);
        if !normalize_vec(&mut c) {
            // Measure-zero degeneracy; restart the column from fresh noise.
            c = random_unit_vector(n, rng);
        }
        cols[j] = c;
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}
