//! Acceptance gate: one test per release criterion, each printing a single
//! pass/fail line (visible under `--nocapture`). Tolerances are stated
//! inline; seeds are fixed so every run checks the same instances.

use conekit::cones::{
    dec_feasible, membership, pairing, sample_member, ConeId, OracleConfig,
};
use conekit::maps::{QuantumMap, StateFunctional};
use conekit::mat::is_psd;
use conekit::rng::{random_density, random_hermitian, random_psd, random_unit_vector, rng_from_seed, trial_seed};
use conekit::states::{
    gen_random, is_ppt_state, is_separable, theorem10_check, theorem11_check, werner,
    werner_ppt_boundary, GenKind,
};
use conekit::verdict::Tolerance;
use conekit::verify::{default_trials, run_suite, ALL_SUITES};
use conekit::ComplexMatrix;

fn gate(num: u32, name: &str, ok: bool) {
    println!("criterion {num} ({name}): {}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {num} ({name}) failed");
}

#[test]
fn criterion_01_adjoint_identity() {
    // 200 random Hermiticity-preserving maps at n = 2 and 3; the adjoint's
    // Choi matrix matches the J-conjugated Choi to 1e-9 (relative) and the
    // trace pairing identity holds to 1e-9 on random Hermitian pairs.
    let ok = [2, 3]
        .iter()
        .all(|&n| run_suite("L3", n, 200, 101).unwrap().pass);
    gate(1, "adjoint Choi identity and pairing", ok);
}

#[test]
fn criterion_02_transpose_identities() {
    // The Choi matrix of t o phi o t is the transposed Choi matrix to 1e-12,
    // and transpose distributes over composition to 1e-9; 200 trials each at
    // n = 2 and 3.
    let ok = [2, 3].iter().all(|&n| {
        run_suite("TT", n, 200, 202).unwrap().pass
            && run_suite("L4a", n, 200, 202).unwrap().pass
    });
    gate(2, "transpose Choi and composition transpose", ok);
}

#[test]
fn criterion_03_choi_criterion() {
    // 100 Kraus-built maps are In for CP; the transpose map is Out for CP
    // with margin -1 at n = 2 and In for copositivity.
    let ok = run_suite("CHOI", 2, 100, 303).unwrap().pass;
    gate(3, "Choi criterion with Kraus round trip", ok);
}

#[test]
fn criterion_04_functional_factorization() {
    // The functional of phi factors through the flip contraction:
    // Tr(pi((iota (x) (phi*)^t)(a (x) b))) = Tr(phi(a) b^T) to 1e-9 on 200
    // random triples at n = 2 and 3.
    let ok = [2, 3]
        .iter()
        .all(|&n| run_suite("L4b", n, 200, 404).unwrap().pass);
    gate(4, "functional factorization", ok);
}

#[test]
fn criterion_05_dual_closure() {
    // For each of CP, the PPT-inducing cone, and POS: 100 sampled members of
    // the registry dual stay members (never decided Out) under the adjoint
    // and under transpose conjugation. 300 trials cycle the three cones.
    let ok = [2, 3]
        .iter()
        .all(|&n| run_suite("T1", n, 300, 505).unwrap().pass);
    gate(5, "registry duals closed under adjoint and transpose", ok);
}

#[test]
fn criterion_06_duality_witness_pair() {
    // Exact pairing values under the trace pairing Tr(C_phi C_alpha):
    // pairing(identity, reduction) = n(1 - n) and pairing(identity,
    // transpose) = n, both to 1e-12. Then 10^4 sampled
    // superpositive-vs-positive pairings at n = 2 stay above -1e-9.
    let mut ok = true;
    for n in [2usize, 3] {
        let iota = QuantumMap::identity(n);
        let p_red = pairing(&iota, &QuantumMap::reduction(n)).unwrap();
        let p_t = pairing(&iota, &QuantumMap::transpose(n)).unwrap();
        let expected_red = n as f64 * (1.0 - n as f64);
        ok &= (p_red - expected_red).abs() <= 1e-12;
        ok &= (p_t - n as f64).abs() <= 1e-12;
    }
    let sp: Vec<QuantumMap> = (0..100)
        .map(|i| sample_member(&ConeId::Sp, 2, i, 606).unwrap())
        .collect();
    let pos: Vec<QuantumMap> = (0..100)
        .map(|i| sample_member(&ConeId::Pos, 2, i, 607).unwrap())
        .collect();
    let mut min_pair = f64::INFINITY;
    for s in &sp {
        for p in &pos {
            min_pair = min_pair.min(pairing(s, p).unwrap());
        }
    }
    ok &= min_pair >= -1e-9;
    gate(6, "duality witness pair", ok);
}

#[test]
fn criterion_07_five_conditions_against_cp() {
    // 200 random functionals checked against CP: zero decided
    // contradictions among the five conditions, and the pairing condition
    // flags exactly the non-PSD densities.
    let cfg = OracleConfig::default().with_trials(30);
    let mut ok = true;
    for idx in 0..200u64 {
        let ts = trial_seed(707, idx);
        let mut rng = rng_from_seed(ts);
        let h = if idx % 2 == 0 {
            random_density(4, &mut rng)
        } else {
            random_hermitian(4, &mut rng)
        };
        let rho = StateFunctional::new(2, h.clone()).unwrap();
        let report = theorem10_check(&rho, &ConeId::Cp, &cfg, ts).unwrap();
        ok &= report.consistent;
        let psd = is_psd(&h, &cfg.tol).unwrap();
        let ii = &report.conditions["ii"];
        ok &= ii.is_out() == psd.is_out() && ii.is_in() == psd.is_in();
    }
    gate(7, "five conditions against CP", ok);
}

#[test]
fn criterion_08_werner_family() {
    // The PPT boundary of the Werner family is located by bisection at 1/3
    // within 1e-6 (recomputed, not hardcoded); at p = 1 the pairing
    // condition is Out with a witness evaluating to -1/2 within 1e-9; at
    // p = 1/4 the functional's map splits as CP + copositive with feasibility
    // residual below 1e-7 and the full report stays In.
    let tol = Tolerance::default();
    let cfg = OracleConfig::default().with_trials(30);
    let mut ok = true;

    let boundary = werner_ppt_boundary(&tol).unwrap();
    ok &= (boundary - 1.0 / 3.0).abs() <= 1e-6;

    let w1 = werner(1.0);
    let report = theorem11_check(&w1, &cfg, 808).unwrap();
    let ii = &report.conditions["ii"];
    ok &= ii.is_out();
    if let Some(x) = &ii.certificate {
        let value = w1.evaluate(x).unwrap();
        ok &= (value + 0.5).abs() <= 1e-9;
    } else {
        ok = false;
    }

    let w14 = werner(0.25);
    let (split_verdict, split) = dec_feasible(w14.density(), 2).unwrap();
    ok &= split_verdict.is_in() && split.residual < 1e-7;
    let report = theorem10_check(&w14, &ConeId::PptCone, &cfg, 808).unwrap();
    ok &= report.consistent;
    ok &= report.conditions["i"].is_in();
    ok &= report.conditions.values().all(|v| !v.is_out());

    gate(8, "Werner family boundary and witnesses", ok);
}

#[test]
fn criterion_09_block_positivity_vs_products() {
    // 100 random Hermitian matrices at n = 2 (half shifted PSD so both
    // verdict branches occur): the block-positivity verdict never
    // contradicts a sampled product-state minimum, and every Out carries a
    // product-vector certificate reproducing its negative value to 1e-9.
    use conekit::mat::{hermitian_eig, is_block_positive, vec_tensor};
    let cfg = OracleConfig::default();
    let mut ok = true;
    let mut outs = 0usize;
    for idx in 0..100u64 {
        let ts = trial_seed(909, idx);
        let mut rng = rng_from_seed(ts);
        let x = if idx % 2 == 0 {
            random_hermitian(4, &mut rng)
        } else {
            let base = random_psd(4, &mut rng);
            let shift = hermitian_eig(&base).unwrap().max_eigenvalue() * 0.15;
            &base - &ComplexMatrix::identity(4).scale(shift)
        };
        let verdict = is_block_positive(&x, 2, cfg.restarts_for(2), &cfg.tol, ts).unwrap();
        let mut sampled_min = f64::INFINITY;
        for _ in 0..100 {
            let xi = random_unit_vector(2, &mut rng);
            let eta = random_unit_vector(2, &mut rng);
            let prod = vec_tensor(&xi, &eta);
            sampled_min = sampled_min.min(x.sandwich(&prod, &prod).re);
        }
        ok &= !(verdict.is_in() && sampled_min < -cfg.tol.abs_eps);
        if verdict.is_out() {
            outs += 1;
            match &verdict.certificate {
                Some(cert) => {
                    let replay = x.sandwich(cert.data(), cert.data()).re;
                    ok &= (replay - verdict.margin).abs() <= 1e-9 && verdict.margin < 0.0;
                }
                None => ok = false,
            }
        }
    }
    ok &= outs > 0;
    gate(9, "block positivity vs product states", ok);
}

#[test]
fn criterion_10_separability_exactness() {
    // On 500 random two-qubit states the separability oracle agrees with the
    // PPT test exactly, and every In ships a product decomposition
    // reconstructing the density to 1e-8.
    let cfg = OracleConfig::default();
    let tol = Tolerance::default();
    let mut ok = true;
    let mut in_count = 0usize;
    for idx in 0..500u64 {
        let ts = trial_seed(1010, idx);
        let obj = gen_random(GenKind::State, 2, ts).unwrap();
        let rho = obj.as_state().unwrap();
        let (sep, decomposition) = is_separable(rho, &cfg, ts).unwrap();
        let ppt = is_ppt_state(rho, &tol).unwrap();
        ok &= sep.is_in() == ppt.is_in() && sep.is_out() == ppt.is_out();
        if sep.is_in() {
            in_count += 1;
            match decomposition {
                Some(d) => {
                    ok &= d.reconstruction_error(rho.density()).unwrap() <= 1e-8;
                }
                None => ok = false,
            }
        }
    }
    ok &= in_count > 0;
    gate(10, "separability matches PPT with decompositions", ok);
}

#[test]
fn criterion_11_determinism() {
    // Re-running any suite with the same seed yields a byte-identical
    // failures list (and identical notes).
    let mut ok = true;
    for suite in ALL_SUITES {
        let trials = (default_trials(suite) / 10).max(5);
        let a = run_suite(suite, 2, trials, 1111).unwrap();
        let b = run_suite(suite, 2, trials, 1111).unwrap();
        ok &= serde_json::to_string(&a.failures).unwrap()
            == serde_json::to_string(&b.failures).unwrap();
        ok &= a.notes == b.notes;
    }
    gate(11, "seeded determinism", ok);
}

#[test]
fn battery_runtime_budget() {
    // The full default battery at n = 2 and 3 stays under the 60 s
    // single-threaded budget.
    let t0 = std::time::Instant::now();
    for n in [2usize, 3] {
        for suite in ALL_SUITES {
            let report = run_suite(suite, n, default_trials(suite), 42).unwrap();
            assert!(report.pass, "suite {suite} at n = {n}");
        }
    }
    let elapsed = t0.elapsed();
    println!("battery runtime: {elapsed:?}");
    assert!(elapsed.as_secs() < 60, "battery took {elapsed:?}");
}

#[test]
fn membership_smoke_at_n4() {
    // Desk-scale smoke at n = 4: structural identities and the Choi
    // criterion still hold one dimension up.
    for suite in ["L3", "TT", "CHOI", "L4b"] {
        let report = run_suite(suite, 4, 10, 1212).unwrap();
        assert!(report.pass, "suite {suite} at n = 4");
    }
    let cfg = OracleConfig::default();
    let phi = gen_random(GenKind::CpMap, 4, 7).unwrap();
    let v = membership(phi.as_map().unwrap(), &ConeId::Cp, &cfg, 7).unwrap();
    assert!(v.is_in());
}
