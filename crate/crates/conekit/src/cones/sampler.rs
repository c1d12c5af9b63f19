//! Seeded generators of cone members.
//!
//! Every sampler is deterministic in (cone, n, index, base seed) and starts
//! with a short canonical list before the randomized tail, so the first few
//! draws always include the standard witnesses (identity, transpose,
//! reduction map, antisymmetric projector). Distributions for the random
//! tail:
//!
//! - CP: Kraus rank k uniform in 1..=n^2, independent Ginibre Kraus operators.
//! - CoCP: partial transpose of the CP draw.
//! - PPTCONE: CP draws kept when the Choi partial transpose is PSD; a
//!   rejected draw is repaired by adding c*I (identity Choi is PPT-invariant),
//!   c “just past” the negative partial-transpose eigenvalue. Measured
//!   acceptance of the raw rejection step (2000 draws): ~0.08 at n = 2 and
//!   zero at n = 3 and 4, so above two dimensions effectively every sample
//!   goes through the repair path.
//! - POS: rotates among AdV, t o AdV, and AdW o reduction o AdV (plus the
//!   cyclic positive map at n = 3), each positive by construction.
//! - SP: sums of at most n^2 terms x -> <v|x|v> a with Haar-like pure v and
//!   Wishart PSD a; the Choi is sum conj(|v><v|) (x) a, manifestly separable.
//! - DEC: AdV + t o AdW sums.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::maps::QuantumMap;
use crate::mat::ComplexMatrix;
use crate::rng::{ginibre, random_psd, random_unit_vector, rng_from_seed, trial_seed};

use super::ConeId;

/// Per-cone stream offsets so different cones never share a trial stream.
fn cone_stream_tag(k: &ConeId) -> u64 {
    match k {
        ConeId::Cp => 0x1,
        ConeId::CoCp => 0x2,
        ConeId::PptCone => 0x3,
        ConeId::Pos => 0x4,
        ConeId::Sp => 0x5,
        ConeId::Dec => 0x6,
        ConeId::Sampled { .. } => 0x7,
    }
}

fn stream_rng(k: &ConeId, base_seed: u64, index: usize) -> ChaCha8Rng {
    let base = base_seed.wrapping_add(cone_stream_tag(k).wrapping_mul(0xA076_1D64_78BD_642F));
    rng_from_seed(trial_seed(base, index as u64))
}

/// Map whose Choi matrix is the antisymmetric projector (I - SWAP)/2.
/// Completely positive, and the classic dual witness against the transpose.
fn antisymmetric_projector_map(n: usize) -> QuantumMap {
    QuantumMap::from_choi(n, ComplexMatrix::antisymmetric_projector(n))
        .expect("projector Choi is Hermitian")
}

pub(crate) fn random_kraus_map(n: usize, rng: &mut ChaCha8Rng) -> QuantumMap {
    let k = rng.random_range(1..=n * n);
    let mut acc = QuantumMap::from_choi(n, ComplexMatrix::zeros(n * n, n * n)).unwrap();
    for _ in 0..k {
        let v = ginibre(n, n, rng);
        acc = acc.add(&QuantumMap::ad(&v).unwrap()).unwrap();
    }
    acc
}

fn partial_transpose_of(phi: &QuantumMap) -> QuantumMap {
    let n = phi.n();
    QuantumMap::from_choi(n, phi.choi().partial_transpose(n).expect("dims fixed"))
        .expect("partial transpose preserves Hermiticity")
}

pub(crate) fn random_sp_map(n: usize, rng: &mut ChaCha8Rng) -> QuantumMap {
    let terms = rng.random_range(1..=n * n);
    let mut choi = ComplexMatrix::zeros(n * n, n * n);
    for _ in 0..terms {
        let v = random_unit_vector(n, rng);
        let omega = ComplexMatrix::outer(&v, &v).conj();
        let a = random_psd(n, rng);
        choi = &choi + &omega.tensor(&a);
    }
    QuantumMap::from_choi(n, choi).expect("sum of PSD tensors is Hermitian")
}

pub(crate) fn random_pos_map(n: usize, index: usize, rng: &mut ChaCha8Rng) -> QuantumMap {
    let variants = if n == 3 { 4 } else { 3 };
    let v = ginibre(n, n, rng);
    match index % variants {
        0 => QuantumMap::ad(&v).unwrap(),
        1 => partial_transpose_of(&QuantumMap::ad(&v).unwrap()),
        2 => {
            let w = ginibre(n, n, rng);
            QuantumMap::ad(&w)
                .unwrap()
                .compose(&QuantumMap::reduction(n))
                .unwrap()
                .compose(&QuantumMap::ad(&v).unwrap())
                .unwrap()
        }
        _ => {
            let w = ginibre(n, n, rng);
            QuantumMap::ad(&w)
                .unwrap()
                .compose(&QuantumMap::cyclic_three(n).unwrap())
                .unwrap()
                .compose(&QuantumMap::ad(&v).unwrap())
                .unwrap()
        }
    }
}

/// Raw rejection attempts per PPTCONE draw before the additive repair.
const PPT_REJECTION_ATTEMPTS: usize = 4;

fn random_ppt_map(n: usize, rng: &mut ChaCha8Rng) -> QuantumMap {
    let mut candidate = random_kraus_map(n, rng);
    for _ in 0..PPT_REJECTION_ATTEMPTS {
        let gamma = candidate.choi().partial_transpose(n).expect("dims fixed");
        let lam = crate::mat::hermitian_eig(&gamma)
            .expect("Hermitian")
            .min_eigenvalue();
        if lam >= 0.0 {
            return candidate;
        }
        candidate = random_kraus_map(n, rng);
    }
    // Repair: C + cI is PSD and has PSD partial transpose once c clears the
    // most negative eigenvalue of C^Gamma.
    let gamma = candidate.choi().partial_transpose(n).expect("dims fixed");
    let lam = crate::mat::hermitian_eig(&gamma)
        .expect("Hermitian")
        .min_eigenvalue();
    let c = 1.05 * (-lam).max(0.0) + 1e-9;
    let choi = candidate.choi() + &ComplexMatrix::identity(n * n).scale(c);
    QuantumMap::from_choi(n, choi).expect("shifted Choi stays Hermitian")
}

fn random_dec_map(n: usize, index: usize, rng: &mut ChaCha8Rng) -> QuantumMap {
    let v = ginibre(n, n, rng);
    let cp = QuantumMap::ad(&v).unwrap();
    match index % 3 {
        0 => cp,
        1 => partial_transpose_of(&cp),
        _ => {
            let w = ginibre(n, n, rng);
            cp.add(&partial_transpose_of(&QuantumMap::ad(&w).unwrap()))
                .unwrap()
        }
    }
}

fn random_sampled_combination(gens: &[QuantumMap], rng: &mut ChaCha8Rng) -> Result<QuantumMap> {
    let n = gens[0].n();
    let mut acc = QuantumMap::from_choi(n, ComplexMatrix::zeros(n * n, n * n))?;
    for g in gens {
        let w: f64 = rng.random_range(0.0..1.0);
        acc = acc.add(&g.scale(w))?;
    }
    Ok(acc)
}

/// Deterministic member of cone `k` at dimension `n`, canonical elements
/// first, randomized tail after.
pub fn sample_member(k: &ConeId, n: usize, index: usize, base_seed: u64) -> Result<QuantumMap> {
    if n == 0 {
        return Err(Error::DimensionMismatch("dimension 0".into()));
    }
    let mut rng = stream_rng(k, base_seed, index);
    let map = match k {
        ConeId::Cp => match index {
            0 => QuantumMap::identity(n),
            1 => antisymmetric_projector_map(n),
            _ => random_kraus_map(n, &mut rng),
        },
        ConeId::CoCp => match index {
            0 => QuantumMap::transpose(n),
            1 => partial_transpose_of(&antisymmetric_projector_map(n)),
            _ => partial_transpose_of(&random_kraus_map(n, &mut rng)),
        },
        ConeId::PptCone => match index {
            0 => QuantumMap::depolarizing(n),
            _ => random_ppt_map(n, &mut rng),
        },
        ConeId::Pos => match index {
            0 => QuantumMap::identity(n),
            1 => QuantumMap::transpose(n),
            2 => QuantumMap::reduction(n),
            3 if n == 3 => QuantumMap::cyclic_three(3)?,
            i => random_pos_map(n, i, &mut rng),
        },
        ConeId::Sp => match index {
            0 => QuantumMap::depolarizing(n),
            _ => random_sp_map(n, &mut rng),
        },
        ConeId::Dec => match index {
            0 => QuantumMap::identity(n),
            1 => QuantumMap::transpose(n),
            i => random_dec_map(n, i, &mut rng),
        },
        ConeId::Sampled { generators } => {
            if generators.is_empty() {
                return Err(Error::NoSampler("sampled cone with no generators".into()));
            }
            if generators[0].n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "sampled cone lives at n = {}, requested n = {n}",
                    generators[0].n()
                )));
            }
            if index < generators.len() {
                generators[index].clone()
            } else {
                random_sampled_combination(generators, &mut rng)?
            }
        }
    };
    Ok(map)
}
