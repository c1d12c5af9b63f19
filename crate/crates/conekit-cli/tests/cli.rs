//! End-to-end tests of the binary: documented example invocations, exit
//! codes, JSON shapes, and the round-trip guarantee on generated files.

use std::path::Path;
use std::process::{Command, Output};

use conekit::maps::{QuantumMap, StateFunctional};
use conekit::states::werner;
use conekit::ComplexMatrix;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conekit"));
    cmd.env_remove("CONEKIT_TOL");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn gen_werner_matches_the_fixed_formula() {
    let out = run(&["gen", "werner", "--p", "0.5", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let state: StateFunctional = serde_json::from_slice(&out.stdout).unwrap();
    let expected = werner(0.5);
    assert!(state.density().frobenius_distance(expected.density()) <= 1e-12);
}

#[test]
fn gen_cp_map_writes_a_psd_choi_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["gen", "cp-map", "--n", "3", "--seed", "9", "--out", "cp.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let raw = std::fs::read_to_string(dir.path().join("cp.json")).unwrap();
    let map: QuantumMap = serde_json::from_str(&raw).unwrap();
    assert_eq!(map.n(), 3);
    let tol = conekit::Tolerance::default();
    assert!(conekit::mat::is_psd(map.choi(), &tol).unwrap().is_in());
}

#[test]
fn gen_sp_map_passes_the_sp_oracle() {
    let out = run(&["gen", "sp-map", "--n", "2"]);
    assert_eq!(code(&out), 0);
    let map: QuantumMap = serde_json::from_slice(&out.stdout).unwrap();
    let cfg = conekit::cones::OracleConfig::default();
    let v = conekit::cones::membership(&map, &conekit::cones::ConeId::Sp, &cfg, 42).unwrap();
    assert!(v.is_in());
}

#[test]
fn gen_is_deterministic_in_the_seed() {
    let a = run(&["gen", "state", "--n", "2", "--seed", "5"]);
    let b = run(&["gen", "state", "--n", "2", "--seed", "5"]);
    let c = run(&["gen", "state", "--n", "2", "--seed", "6"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_rejects_bad_arguments() {
    assert_eq!(code(&run(&["gen", "mystery-map", "--n", "2"])), 2);
    assert_eq!(code(&run(&["gen", "werner", "--n", "2"])), 2);
    assert_eq!(code(&run(&["gen", "werner", "--p", "1.5", "--n", "2"])), 2);
    assert_eq!(code(&run(&["gen", "state", "--p", "0.5", "--n", "2"])), 2);
    // Werner states are two-qubit only.
    assert_eq!(code(&run(&["gen", "werner", "--p", "0.5", "--n", "3"])), 2);
}

#[test]
fn check_transpose_map_against_cp_is_out_with_margin_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let t = QuantumMap::transpose(2);
    std::fs::write(&path, serde_json::to_string(&t).unwrap()).unwrap();

    let out = run(&["check", path.to_str().unwrap(), "--cone", "cp"]);
    assert_eq!(code(&out), 1);
    let json = stdout_json(&out);
    assert_eq!(json["verdict"]["state"], "out");
    let margin = json["verdict"]["margin"].as_f64().unwrap();
    assert!((margin + 1.0).abs() <= 1e-9, "margin {margin}");
    assert_eq!(json["seed"], 42);
    assert!(json["version"].is_string());

    // The same map is copositive.
    let out = run(&["check", path.to_str().unwrap(), "--cone", "cocp"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn check_ppt_flags_the_entangled_werner_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w1.json");
    std::fs::write(&path, serde_json::to_string(&werner(1.0)).unwrap()).unwrap();
    let out = run(&["check", path.to_str().unwrap(), "--ppt"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["verdict"]["state"], "out");
}

#[test]
fn check_separable_attaches_a_decomposition_for_the_maximally_mixed_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixed.json");
    let mixed = StateFunctional::new(2, ComplexMatrix::identity(4).scale(0.25)).unwrap();
    std::fs::write(&path, serde_json::to_string(&mixed).unwrap()).unwrap();

    let out = run(&["check", path.to_str().unwrap(), "--separable"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json = stdout_json(&out);
    assert_eq!(json["verdict"]["state"], "in");
    let weights: Vec<f64> = json["decomposition"]["weights"]
        .as_array()
        .expect("decomposition attached")
        .iter()
        .map(|w| w.as_f64().unwrap())
        .collect();
    let total: f64 = weights.iter().sum();
    assert!((total - 1.0).abs() <= 1e-8, "weights sum to {total}");
}

#[test]
fn check_requires_exactly_one_mode() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, serde_json::to_string(&werner(0.25)).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&run(&["check", p])), 2);
    assert_eq!(code(&run(&["check", p, "--cone", "cp", "--ppt"])), 2);
    assert_eq!(code(&run(&["check", p, "--ppt", "--separable"])), 2);
    assert_eq!(code(&run(&["check", p, "--cone", "nope"])), 2);
    assert_eq!(code(&run(&["check", "/no/such/file.json", "--ppt"])), 2);
    // A state file is not a map.
    assert_eq!(code(&run(&["check", p, "--cone", "cp"])), 2);
}

#[test]
fn verify_all_passes_and_reports_carry_version_and_seed() {
    let out = run(&["verify", "--all", "--n", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json = stdout_json(&out);
    assert_eq!(json["pass"], true);
    assert_eq!(json["seed"], 42);
    let reports = json["reports"].as_array().unwrap();
    assert_eq!(reports.len(), conekit::verify::ALL_SUITES.len());
    for r in reports {
        assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(r["seed"], 42);
        assert_eq!(r["pass"], true);
    }
}

#[test]
fn verify_named_suite_with_explicit_budget() {
    let out = run(&["verify", "L3", "--n", "3", "--trials", "500"]);
    assert_eq!(code(&out), 0);
    let json = stdout_json(&out);
    assert_eq!(json["reports"][0]["trials"], 500);
    assert_eq!(json["reports"][0]["n"], 3);
}

#[test]
fn verify_unknown_suite_exits_two() {
    let out = run(&["verify", "NOPE"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown suite"));
    assert_eq!(code(&run(&["verify"])), 2);
}

#[test]
fn report_subcommand_covers_both_report_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, serde_json::to_string(&werner(0.25)).unwrap()).unwrap();
    let p = path.to_str().unwrap();

    let out = run(&["report", "t10", p, "--cone", "cp"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json = stdout_json(&out);
    assert_eq!(json["report"]["consistent"], true);
    assert_eq!(json["report"]["cone"], "cp");
    assert!(json["report"]["conditions"]["ii"].is_object());

    let out = run(&["report", "t11", p]);
    assert_eq!(code(&out), 0);

    assert_eq!(code(&run(&["report", "t10", p])), 2);
    assert_eq!(code(&run(&["report", "t12", p])), 2);
}

#[test]
fn tolerance_env_var_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, serde_json::to_string(&werner(0.25)).unwrap()).unwrap();
    let p = path.to_str().unwrap();

    let out = bin()
        .env("CONEKIT_TOL", "not-a-number")
        .args(["check", p, "--ppt"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);

    let out = bin()
        .env("CONEKIT_TOL", "1e-6")
        .args(["check", p, "--ppt"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn generated_files_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    for (kind, flags, expect) in [
        ("ppt-state", vec!["--ppt"], 0),
        ("state", vec!["--ppt"], -1), // either 0 or 1, never a load error
        ("pos-map", vec!["--cone", "pos"], -1),
        ("cp-map", vec!["--cone", "cp"], 0),
    ] {
        let file = dir.path().join(format!("{kind}.json"));
        let out = run(&["gen", kind, "--n", "2", "--seed", "11", "--out", file.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "gen {kind}");
        let mut args = vec!["check", file.to_str().unwrap()];
        args.extend(&flags);
        let out = run(&args);
        match expect {
            -1 => assert!(
                [0, 1, 3].contains(&code(&out)),
                "check {kind} exited {}",
                code(&out)
            ),
            want => assert_eq!(code(&out), want, "check {kind}"),
        }
    }
}
