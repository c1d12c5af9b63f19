//! Cone registry: the six concrete mapping cones, their duality pairing, and
//! tri-state membership oracles.
//!
//! Decidable memberships (CP, CoCP, PPTCONE) are spectral. POS, SP, and DEC
//! are semidecisions: Out always carries a certificate, In is only declared
//! when a sound criterion establishes it (PSD shortcut, confidence-budget
//! descent, explicit decomposition, or a converged feasibility split), and
//! everything else is Unknown. Sampled duality tests can refute but never
//! confirm, and say so by returning Unknown instead of In.
//!
//! Margin semantics per cone: CP/CoCP/PPTCONE report the relevant minimum
//! eigenvalue; POS reports the best product expectation found; SP reports the
//! separability margin; DEC reports the feasibility residual (small is good).

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::maps::{QuantumMap, StateFunctional};
use crate::mat::{is_block_positive, is_psd, ComplexMatrix};
use crate::rng::{random_psd, rng_from_seed, trial_seed};
use crate::verdict::{Tolerance, Verdict};

pub mod dec;
mod sampler;

pub use dec::{dec_feasible, DecSplit, DEC_RESIDUAL_EPS};
pub use sampler::sample_member;
pub(crate) use sampler::{random_kraus_map, random_pos_map, random_sp_map};

/// The cones the registry knows about. `Sampled` wraps caller-supplied
/// generators and only supports semidecisions.
#[derive(Debug, Clone, PartialEq)]
pub enum ConeId {
    /// Completely positive maps: PSD Choi matrix.
    Cp,
    /// Copositive maps (transpose composed with CP): PSD Choi partial transpose.
    CoCp,
    /// Maps both completely positive and copositive.
    PptCone,
    /// Positive maps: block-positive Choi matrix.
    Pos,
    /// Superpositive (entanglement-breaking) maps: separable Choi matrix.
    Sp,
    /// Decomposable maps: Choi splits as A + B^Gamma with A, B PSD.
    Dec,
    /// Abstract cone given by finitely many generators of equal dimension.
    Sampled { generators: Vec<QuantumMap> },
}

impl ConeId {
    /// Wraps generators after checking they share a dimension.
    pub fn sampled(generators: Vec<QuantumMap>) -> Result<Self> {
        if let Some(first) = generators.first() {
            let n = first.n();
            if generators.iter().any(|g| g.n() != n) {
                return Err(Error::DimensionMismatch(
                    "sampled cone generators have mixed dimensions".into(),
                ));
            }
        }
        Ok(ConeId::Sampled { generators })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConeId::Cp => "cp",
            ConeId::CoCp => "cocp",
            ConeId::PptCone => "ppt-cone",
            ConeId::Pos => "pos",
            ConeId::Sp => "sp",
            ConeId::Dec => "dec",
            ConeId::Sampled { .. } => "sampled",
        }
    }

    pub fn is_concrete(&self) -> bool {
        !matches!(self, ConeId::Sampled { .. })
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cp" => Ok(ConeId::Cp),
            "cocp" => Ok(ConeId::CoCp),
            "ppt-cone" => Ok(ConeId::PptCone),
            "pos" => Ok(ConeId::Pos),
            "sp" => Ok(ConeId::Sp),
            "dec" => Ok(ConeId::Dec),
            other => Err(Error::UnsupportedCone(format!(
                "unknown cone \"{other}\" (expected cp, cocp, ppt-cone, pos, sp, dec)"
            ))),
        }
    }
}

impl Serialize for ConeId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for ConeId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        ConeId::from_str(&s).map_err(D::Error::custom)
    }
}

/// Budgets and tolerances shared by the semidecision oracles.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub tol: Tolerance,
    /// Multi-start budget for block-positivity descent. `None` means the
    /// confidence budget 50 n^2, the smallest count for which the oracle is
    /// allowed to answer In without a PSD shortcut.
    pub restarts: Option<usize>,
    /// Sampling budget for witness searches inside semidecisions.
    pub trials: usize,
    /// Whether separability may spend time searching for an explicit product
    /// decomposition (the In certificate). Verdicts never depend on this in
    /// the exact regime; above it, disabling trades In answers for speed.
    pub decompose: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            tol: Tolerance::default(),
            restarts: None,
            trials: 400,
            decompose: true,
        }
    }
}

impl OracleConfig {
    pub fn restarts_for(&self, n: usize) -> usize {
        self.restarts.unwrap_or(50 * n * n)
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}

/// Registry dual: POS <-> SP, CP <-> CP, CoCP <-> CoCP, PPTCONE <-> DEC.
/// Involutive on the six concrete cones; sampled cones have no registry dual.
pub fn dual_cone(k: &ConeId) -> Result<ConeId> {
    match k {
        ConeId::Cp => Ok(ConeId::Cp),
        ConeId::CoCp => Ok(ConeId::CoCp),
        ConeId::PptCone => Ok(ConeId::Dec),
        ConeId::Dec => Ok(ConeId::PptCone),
        ConeId::Pos => Ok(ConeId::Sp),
        ConeId::Sp => Ok(ConeId::Pos),
        ConeId::Sampled { .. } => Err(Error::UnsupportedCone(
            "sampled cones have no registry dual; use sampled pairing tests".into(),
        )),
    }
}

/// Tr(C_phi C_alpha), real for Hermitian Choi matrices.
pub fn pairing(phi: &QuantumMap, alpha: &QuantumMap) -> Result<f64> {
    if phi.n() != alpha.n() {
        return Err(Error::DimensionMismatch(format!(
            "pairing maps on dim {} and {}",
            phi.n(),
            alpha.n()
        )));
    }
    Ok(phi.choi().hs_pair(alpha.choi())?.re)
}

/// Tri-state membership of `phi` in cone `k`.
pub fn membership(phi: &QuantumMap, k: &ConeId, cfg: &OracleConfig, seed: u64) -> Result<Verdict> {
    let n = phi.n();
    match k {
        ConeId::Cp => is_psd(phi.choi(), &cfg.tol),
        ConeId::CoCp => is_psd(&phi.choi().partial_transpose(n)?, &cfg.tol),
        ConeId::PptCone => {
            let direct = is_psd(phi.choi(), &cfg.tol)?;
            if direct.is_out() {
                return Ok(direct);
            }
            let gamma = is_psd(&phi.choi().partial_transpose(n)?, &cfg.tol)?;
            if gamma.is_out() {
                // Certificate lives on the partial-transposed side.
                return Ok(gamma);
            }
            Ok(Verdict::decided_in(direct.margin.min(gamma.margin)))
        }
        ConeId::Pos => is_block_positive(phi.choi(), n, cfg.restarts_for(n), &cfg.tol, seed),
        ConeId::Sp => sp_membership(phi, cfg, seed),
        ConeId::Dec => {
            let choi = phi.choi();
            if is_psd(choi, &cfg.tol)?.is_in() {
                return Ok(Verdict::decided_in(0.0));
            }
            if is_psd(&choi.partial_transpose(n)?, &cfg.tol)?.is_in() {
                return Ok(Verdict::decided_in(0.0));
            }
            Ok(dec_feasible(choi, n)?.0)
        }
        ConeId::Sampled { generators } => sampled_trivial_membership(phi, generators, &cfg.tol),
    }
}

/// SP = separable Choi matrix. Non-PSD Choi is immediately Out (SP sits
/// inside CP); otherwise the normalized Choi goes through the separability
/// oracle.
fn sp_membership(phi: &QuantumMap, cfg: &OracleConfig, seed: u64) -> Result<Verdict> {
    let n = phi.n();
    let psd = is_psd(phi.choi(), &cfg.tol)?;
    if psd.is_out() {
        return Ok(psd);
    }
    let tr = phi.choi().trace().re;
    if tr <= 1e-12 {
        // PSD with zero trace is the zero map, which every cone contains.
        return Ok(Verdict::decided_in(0.0));
    }
    let rho = StateFunctional::new(n, phi.choi().scale(1.0 / tr))?;
    let (verdict, _) = crate::states::is_separable(&rho, cfg, seed)?;
    Ok(verdict)
}

/// A sampled cone decides membership only in the trivial case: the Choi
/// matrix is a nonnegative multiple of a single generator (or zero).
fn sampled_trivial_membership(
    phi: &QuantumMap,
    generators: &[QuantumMap],
    tol: &Tolerance,
) -> Result<Verdict> {
    let c = phi.choi();
    let scale = c.frobenius_norm();
    if scale <= tol.abs_eps {
        return Ok(Verdict::decided_in(0.0));
    }
    for g in generators {
        if g.n() != phi.n() {
            return Err(Error::DimensionMismatch(
                "sampled generator dimension differs from the probe map".into(),
            ));
        }
        let gg = g.choi().hs_pair(g.choi())?.re;
        if gg <= tol.abs_eps {
            continue;
        }
        let coeff = g.choi().hs_pair(c)?.re / gg;
        if coeff < -tol.abs_eps {
            continue;
        }
        let diff = (c - &g.choi().scale(coeff)).frobenius_norm();
        if diff <= 1e-9 * scale.max(1.0) {
            return Ok(Verdict::decided_in(0.0));
        }
    }
    Ok(Verdict::unknown(0.0))
}

/// Sampled test of the dual pairing: Out with the violating generator's Choi
/// matrix when some Tr(C_phi C_alpha) < -abs_eps; never In (a finite sample
/// cannot certify the infimum); Unknown carries the minimum pairing seen.
pub fn dual_membership_sampled(
    phi: &QuantumMap,
    k: &ConeId,
    trials: usize,
    tol: &Tolerance,
    seed: u64,
) -> Result<Verdict> {
    let n = phi.n();
    let mut min_pairing = f64::INFINITY;
    for idx in 0..trials {
        let alpha = sample_member(k, n, idx, seed)?;
        let p = pairing(phi, &alpha)?;
        if p < -tol.abs_eps {
            return Ok(Verdict::decided_out(p, Some(alpha.into_choi())));
        }
        min_pairing = min_pairing.min(p);
    }
    Ok(Verdict::unknown(if min_pairing.is_finite() {
        min_pairing
    } else {
        0.0
    }))
}

/// Membership of `beta` in the composition-dual of `k`: beta is in iff
/// beta o alpha* is completely positive for every alpha in k.
///
/// For concrete cones the registry resolves this set to the pairing dual of
/// `k` and the answer can be decided; a sampled Out witness (the alpha whose
/// composition breaks complete positivity) is preferred when one is found
/// within the budget. Sampled cones get the semidecision only.
pub fn k_sharp_membership(
    beta: &QuantumMap,
    k: &ConeId,
    trials: usize,
    cfg: &OracleConfig,
    seed: u64,
) -> Result<Verdict> {
    let n = beta.n();
    let registry = match dual_cone(k) {
        Ok(d) => Some(membership(beta, &d, cfg, seed)?),
        Err(_) => None,
    };
    if let Some(v) = &registry {
        if v.is_in() {
            return Ok(v.clone());
        }
    }
    let mut worst = f64::INFINITY;
    for idx in 0..trials {
        let alpha = sample_member(k, n, idx, seed)?;
        let composed = beta.compose(&alpha.adjoint())?;
        let v = is_psd(composed.choi(), &cfg.tol)?;
        if v.is_out() {
            return Ok(Verdict::decided_out(v.margin, Some(alpha.into_choi())));
        }
        worst = worst.min(v.margin);
    }
    if let Some(v) = registry {
        if v.is_out() {
            return Ok(v);
        }
    }
    Ok(Verdict::unknown(if worst.is_finite() { worst } else { 0.0 }))
}

/// Seeded elements of P(B(H), k) = {x : (iota (x) alpha)(x) >= 0 for all
/// alpha in k}, generated as (iota (x) alpha*)(y) with alpha drawn from the
/// registry dual of `k` and y a random PSD matrix.
pub fn sample_pbk(k: &ConeId, n: usize, count: usize, seed: u64) -> Result<Vec<ComplexMatrix>> {
    let dual = dual_cone(k)?;
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let alpha = sample_member(&dual, n, idx, seed)?;
        let mut rng = rng_from_seed(trial_seed(seed ^ 0x5BD1_E995, idx as u64));
        let y = random_psd(n * n, &mut rng);
        out.push(alpha.adjoint().apply_id_tensor(&y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::hermitian_eig;

    fn cfg() -> OracleConfig {
        OracleConfig::default()
    }

    #[test]
    fn transpose_map_memberships() {
        let t = QuantumMap::transpose(2);
        let v = membership(&t, &ConeId::Cp, &cfg(), 1).unwrap();
        assert!(v.is_out());
        assert!((v.margin + 1.0).abs() < 1e-12);
        assert!(v.certificate.is_some());
        assert!(membership(&t, &ConeId::CoCp, &cfg(), 1).unwrap().is_in());
        assert!(membership(&t, &ConeId::PptCone, &cfg(), 1).unwrap().is_out());
        assert!(membership(&t, &ConeId::Dec, &cfg(), 1).unwrap().is_in());
        assert!(membership(&t, &ConeId::Pos, &cfg(), 1).unwrap().is_in());
    }

    #[test]
    fn depolarizing_is_superpositive() {
        let d = QuantumMap::depolarizing(2);
        assert!(membership(&d, &ConeId::Sp, &cfg(), 2).unwrap().is_in());
    }

    #[test]
    fn identity_map_is_not_superpositive() {
        let v = membership(&QuantumMap::identity(2), &ConeId::Sp, &cfg(), 3).unwrap();
        assert!(v.is_out());
    }

    #[test]
    fn reduction_map_positive_but_not_cp() {
        let r = QuantumMap::reduction(2);
        let v = membership(&r, &ConeId::Cp, &cfg(), 4).unwrap();
        assert!(v.is_out());
        assert!((v.margin + 1.0).abs() < 1e-12);
        let v = membership(&r, &ConeId::Pos, &cfg(), 4).unwrap();
        assert!(v.is_in(), "reduction map should certify positive: {v:?}");
    }

    #[test]
    fn dual_registry_is_involutive() {
        for k in [
            ConeId::Cp,
            ConeId::CoCp,
            ConeId::PptCone,
            ConeId::Pos,
            ConeId::Sp,
            ConeId::Dec,
        ] {
            assert_eq!(dual_cone(&dual_cone(&k).unwrap()).unwrap(), k);
        }
        assert_eq!(dual_cone(&ConeId::Pos).unwrap(), ConeId::Sp);
        assert_eq!(dual_cone(&ConeId::Cp).unwrap(), ConeId::Cp);
        assert!(dual_cone(&ConeId::Sampled { generators: vec![] }).is_err());
    }

    #[test]
    fn cone_names_round_trip() {
        for k in [
            ConeId::Cp,
            ConeId::CoCp,
            ConeId::PptCone,
            ConeId::Pos,
            ConeId::Sp,
            ConeId::Dec,
        ] {
            let parsed: ConeId = k.name().parse().unwrap();
            assert_eq!(parsed, k);
            let json = serde_json::to_string(&k).unwrap();
            let back: ConeId = serde_json::from_str(&json).unwrap();
            assert_eq!(back, k);
        }
        assert!("swap".parse::<ConeId>().is_err());
    }

    #[test]
    fn pairing_canonical_values() {
        let n = 2;
        let iota = QuantumMap::identity(n);
        assert!((pairing(&iota, &QuantumMap::transpose(n)).unwrap() - n as f64).abs() < 1e-12);
        // Reduction map scaled by 1/n has Choi (1/n)I - |Omega><Omega|.
        let witness = QuantumMap::reduction(n).scale(1.0 / n as f64);
        let got = pairing(&iota, &witness).unwrap();
        assert!((got - (1.0 - n as f64)).abs() < 1e-12);
        let v = crate::rng::ginibre(n, n, &mut rng_from_seed(5));
        let cp = QuantumMap::ad(&v).unwrap();
        assert!(pairing(&cp, &cp).unwrap() >= 0.0);
    }

    #[test]
    fn dual_sampled_flags_identity_against_pos() {
        let v = dual_membership_sampled(
            &QuantumMap::identity(2),
            &ConeId::Pos,
            50,
            &Tolerance::default(),
            9,
        )
        .unwrap();
        assert!(v.is_out());
        assert!(v.margin < -0.5);
        // The canonical reduction witness sits at index 2 of the POS stream.
        let cert = v.certificate.unwrap();
        assert!(cert.max_abs_diff(QuantumMap::reduction(2).choi()) < 1e-12);
    }

    #[test]
    fn dual_sampled_flags_transpose_against_cp() {
        let v = dual_membership_sampled(
            &QuantumMap::transpose(2),
            &ConeId::Cp,
            50,
            &Tolerance::default(),
            9,
        )
        .unwrap();
        assert!(v.is_out());
        assert!((v.margin + 1.0).abs() < 1e-12);
        let cert = v.certificate.unwrap();
        assert!(cert.max_abs_diff(&ComplexMatrix::antisymmetric_projector(2)) < 1e-12);
    }

    #[test]
    fn dual_sampled_never_confirms() {
        let d = QuantumMap::depolarizing(2);
        let v = dual_membership_sampled(&d, &ConeId::Pos, 200, &Tolerance::default(), 11).unwrap();
        assert!(v.is_unknown());
        assert!(v.margin >= -1e-9, "min pairing {}", v.margin);
    }

    #[test]
    fn k_sharp_registry_and_witness_paths() {
        let iota = QuantumMap::identity(2);
        assert!(k_sharp_membership(&iota, &ConeId::Cp, 20, &cfg(), 1)
            .unwrap()
            .is_in());
        let t = QuantumMap::transpose(2);
        let v = k_sharp_membership(&t, &ConeId::Cp, 20, &cfg(), 1).unwrap();
        assert!(v.is_out());
        // compose(t, iota*) = t itself; its Choi has eigenvalue -1.
        assert!((v.margin + 1.0).abs() < 1e-10);
        let cert = v.certificate.unwrap();
        assert!(cert.max_abs_diff(&ComplexMatrix::maximally_entangled(2)) < 1e-12);
    }

    #[test]
    fn k_sharp_cp_compose_stays_cp_for_sp() {
        let v = crate::rng::ginibre(2, 2, &mut rng_from_seed(31));
        let cp = QuantumMap::ad(&v).unwrap();
        let verdict = k_sharp_membership(&cp, &ConeId::Sp, 30, &cfg(), 2).unwrap();
        // Registry: SP-sharp = POS; a CP map certifies positive via the PSD
        // shortcut inside block positivity.
        assert!(verdict.is_in());
    }

    #[test]
    fn sample_pbk_cp_gives_psd() {
        let tol = Tolerance::default();
        for x in sample_pbk(&ConeId::Cp, 2, 8, 3).unwrap() {
            assert!(is_psd(&x, &tol).unwrap().is_in());
        }
    }

    #[test]
    fn sample_pbk_outputs_pass_defining_property() {
        // x in P(B(H),K) must keep (iota (x) alpha)(x) PSD for alpha in K.
        for k in [ConeId::Cp, ConeId::PptCone] {
            let xs = sample_pbk(&k, 2, 5, 7).unwrap();
            for (xi, x) in xs.iter().enumerate() {
                assert!(x.hermitian_deviation() < 1e-10);
                for idx in 0..6 {
                    let alpha = sample_member(&k, 2, idx, 13).unwrap();
                    let y = alpha.apply_id_tensor(x).unwrap();
                    let lam = hermitian_eig(&y).unwrap().min_eigenvalue();
                    let scale = y.frobenius_norm().max(1.0);
                    assert!(
                        lam >= -1e-8 * scale,
                        "cone {k:?}, sample {xi}, alpha {idx}: min eig {lam}"
                    );
                }
            }
        }
    }

    #[test]
    fn ppt_cone_membership_requires_both_sides() {
        let dep = QuantumMap::depolarizing(2);
        assert!(membership(&dep, &ConeId::PptCone, &cfg(), 1).unwrap().is_in());
        let iota = QuantumMap::identity(2);
        let v = membership(&iota, &ConeId::PptCone, &cfg(), 1).unwrap();
        assert!(v.is_out());
        assert!((v.margin + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dec_membership_accepts_mixed_split() {
        let mut rng = rng_from_seed(41);
        let v = crate::rng::ginibre(2, 2, &mut rng);
        let w = crate::rng::ginibre(2, 2, &mut rng);
        let cp = QuantumMap::ad(&v).unwrap();
        let gamma = QuantumMap::ad(&w).unwrap().choi().partial_transpose(2).unwrap();
        let dec = cp.add(&QuantumMap::from_choi(2, gamma).unwrap()).unwrap();
        let verdict = membership(&dec, &ConeId::Dec, &cfg(), 1).unwrap();
        assert!(verdict.is_in());
        assert!(verdict.margin <= DEC_RESIDUAL_EPS);
    }

    #[test]
    fn cone_order_sp_inside_everything() {
        for idx in 0..6 {
            let phi = sample_member(&ConeId::Sp, 2, idx, 17).unwrap();
            for k in [
                ConeId::Cp,
                ConeId::CoCp,
                ConeId::PptCone,
                ConeId::Dec,
                ConeId::Pos,
            ] {
                let v = membership(&phi, &k, &cfg(), 23).unwrap();
                assert!(!v.is_out(), "SP sample {idx} flagged Out for {k:?}");
            }
        }
    }

    #[test]
    fn cone_order_cp_inside_pos_and_dec() {
        for idx in 2..8 {
            let phi = sample_member(&ConeId::Cp, 2, idx, 19).unwrap();
            for k in [ConeId::Pos, ConeId::Dec] {
                let v = membership(&phi, &k, &cfg(), 29).unwrap();
                assert!(v.is_in(), "CP sample {idx} not In for {k:?}: {v:?}");
            }
        }
    }

    #[test]
    fn composition_with_cp_preserves_cones() {
        let mut rng = rng_from_seed(47);
        for k in [ConeId::Cp, ConeId::CoCp, ConeId::PptCone, ConeId::Dec] {
            let member = sample_member(&k, 2, 3, 53).unwrap();
            let u = crate::rng::random_unitary(2, &mut rng);
            let cp = QuantumMap::ad(&u).unwrap();
            for composed in [member.compose(&cp).unwrap(), cp.compose(&member).unwrap()] {
                let v = membership(&composed, &k, &cfg(), 59).unwrap();
                assert!(!v.is_out(), "{k:?} broken by CP composition");
            }
        }
    }

    #[test]
    fn sampled_cone_trivial_membership() {
        let k = ConeId::sampled(vec![QuantumMap::transpose(2)]).unwrap();
        let v = membership(&QuantumMap::transpose(2).scale(2.5), &k, &cfg(), 1).unwrap();
        assert!(v.is_in());
        let v = membership(&QuantumMap::identity(2), &k, &cfg(), 1).unwrap();
        assert!(v.is_unknown());
        // Negative multiples do not match.
        let v = membership(&QuantumMap::transpose(2).scale(-1.0), &k, &cfg(), 1).unwrap();
        assert!(v.is_unknown());
    }

    #[test]
    fn sampled_cone_mixed_dims_rejected() {
        let gens = vec![QuantumMap::identity(2), QuantumMap::identity(3)];
        assert!(ConeId::sampled(gens).is_err());
    }
}
