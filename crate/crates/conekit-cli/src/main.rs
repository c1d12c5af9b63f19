//! Command-line front end: generate objects, run membership checks, run
//! verification suites, and produce full condition reports. All output is
//! JSON on stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 = success / In / all suites pass, 1 = Out / a suite
//! failed / inconsistent report, 2 = bad arguments or bad input, 3 =
//! Unknown. No wall-clock entropy anywhere: every random path runs from
//! `--seed`, which defaults to [`DEFAULT_SEED`] and is echoed in reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use conekit::cones::{membership, ConeId, OracleConfig};
use conekit::maps::{QuantumMap, StateFunctional};
use conekit::mat::is_psd;
use conekit::states::{
    gen_random, is_ppt_state, is_separable, theorem10_check, theorem11_check, GenKind, GenObject,
};
use conekit::verify::{default_trials, run_suite, ALL_SUITES};

/// Seed used when `--seed` is not given; reports echo whichever seed ran.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "conekit",
    version,
    about = "Positive-map and entanglement toolbox: generators, cone membership, verification suites"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a map or state and write it as JSON (stdout unless --out).
    Gen {
        /// One of: state, ppt-state, cp-map, pos-map, sp-map, werner
        kind: String,
        /// Local dimension (the objects live on an n x n system pair)
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Werner mixing parameter in [0, 1]; required for kind "werner"
        #[arg(long)]
        p: Option<f64>,
        /// Output path; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide membership of a stored object and print the verdict.
    Check {
        /// Path to a JSON map ({n, choi}) or state ({n, density})
        path: PathBuf,
        /// Cone membership for maps: cp, cocp, ppt-cone, pos, sp, dec
        #[arg(long, conflicts_with_all = ["ppt", "separable"])]
        cone: Option<String>,
        /// PPT test for states
        #[arg(long, conflicts_with = "separable")]
        ppt: bool,
        /// Separability test for states; attaches a decomposition when found
        #[arg(long)]
        separable: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Witness-search budget inside semidecisions
        #[arg(long)]
        trials: Option<usize>,
        /// Multi-start budget for block-positivity descent
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Run named verification suites and print the aggregate report.
    Verify {
        /// Suite ids (see --all for the full battery)
        suites: Vec<String>,
        /// Run every suite
        #[arg(long)]
        all: bool,
        /// Dimension; without it, --all runs n = 2 and 3, named suites run n = 2
        #[arg(long)]
        n: Option<usize>,
        /// Per-suite trial count; defaults to each suite's own budget
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Produce a full conditions report for a stored state functional.
    Report {
        /// Either "t10" (five conditions against a cone) or "t11" (PPT conditions)
        which: String,
        /// Path to a JSON state functional
        path: PathBuf,
        /// Cone the five conditions are checked against; required for t10
        #[arg(long)]
        cone: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Witness-search budget inside semidecisions
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<u8> {
    let cli = Cli::parse();
    let tol_override = tol_from_env()?;
    match cli.cmd {
        Cmd::Gen {
            kind,
            n,
            seed,
            p,
            out,
        } => cmd_gen(&kind, n, seed, p, out.as_deref()),
        Cmd::Check {
            path,
            cone,
            ppt,
            separable,
            seed,
            trials,
            restarts,
        } => {
            let mut cfg = OracleConfig::default();
            if let Some(eps) = tol_override {
                cfg.tol.abs_eps = eps;
            }
            if let Some(t) = trials {
                cfg.trials = t;
            }
            cfg.restarts = restarts;
            cmd_check(&path, cone.as_deref(), ppt, separable, &cfg, seed)
        }
        Cmd::Verify {
            suites,
            all,
            n,
            trials,
            seed,
        } => cmd_verify(&suites, all, n, trials, seed),
        Cmd::Report {
            which,
            path,
            cone,
            seed,
            trials,
        } => {
            let mut cfg = OracleConfig::default().with_trials(trials.unwrap_or(60));
            if let Some(eps) = tol_override {
                cfg.tol.abs_eps = eps;
            }
            cmd_report(&which, &path, cone.as_deref(), &cfg, seed)
        }
    }
}

/// CONEKIT_TOL overrides the absolute spectral tolerance.
fn tol_from_env() -> Result<Option<f64>> {
    match std::env::var("CONEKIT_TOL") {
        Ok(raw) => {
            let eps: f64 = raw
                .trim()
                .parse()
                .map_err(|_| anyhow!("CONEKIT_TOL must be a positive number, got {raw:?}"))?;
            if !(eps.is_finite() && eps > 0.0) {
                bail!("CONEKIT_TOL must be a positive number, got {raw:?}");
            }
            Ok(Some(eps))
        }
        Err(_) => Ok(None),
    }
}

fn cmd_gen(kind: &str, n: usize, seed: u64, p: Option<f64>, out: Option<&Path>) -> Result<u8> {
    let kind = match kind {
        "state" => GenKind::State,
        "ppt-state" => GenKind::PptState,
        "cp-map" => GenKind::CpMap,
        "pos-map" => GenKind::PosMap,
        "sp-map" => GenKind::SpMap,
        "werner" => {
            let p = p.context("kind \"werner\" requires --p")?;
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1], got {p}");
            }
            GenKind::Werner(p)
        }
        other => bail!("unknown kind {other:?} (expected state, ppt-state, cp-map, pos-map, sp-map, werner)"),
    };
    if p.is_some() && !matches!(kind, GenKind::Werner(_)) {
        bail!("--p only applies to kind \"werner\"");
    }
    let object = gen_random(kind, n, seed)?;
    let text = serde_json::to_string_pretty(&object)?;
    self_check(&kind, &object, &text, n, seed)?;
    match out {
        Some(path) => {
            fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            eprintln!("wrote {kind:?} (n = {n}, seed = {seed}) to {}", path.display());
        }
        None => println!("{text}"),
    }
    Ok(0)
}

/// Generated files must re-load to values passing their own invariants;
/// kinds with a decidable defining property get that property re-checked.
fn self_check(kind: &GenKind, object: &GenObject, text: &str, n: usize, seed: u64) -> Result<()> {
    match object {
        GenObject::Map(_) => {
            let map: QuantumMap = serde_json::from_str(text).context("generated map round trip")?;
            let cfg = OracleConfig::default().with_trials(40);
            match kind {
                GenKind::CpMap => {
                    let psd = is_psd(map.choi(), &cfg.tol)?;
                    if !psd.is_in() {
                        bail!("generated cp-map failed its PSD self-check");
                    }
                }
                GenKind::SpMap => {
                    let mut cfg = cfg;
                    cfg.decompose = false;
                    let v = membership(&map, &ConeId::Sp, &cfg, seed)?;
                    if v.is_out() {
                        bail!("generated sp-map was rejected by the SP oracle");
                    }
                }
                GenKind::PosMap => {
                    let v = membership(&map, &ConeId::Pos, &cfg, seed)?;
                    if v.is_out() {
                        bail!("generated pos-map was rejected by the positivity oracle");
                    }
                }
                _ => {}
            }
        }
        GenObject::State(_) => {
            let state: StateFunctional =
                serde_json::from_str(text).context("generated state round trip")?;
            if !state.is_state() {
                bail!("generated state failed its PSD unit-trace self-check");
            }
            if state.n() != n {
                bail!("generated state carries the wrong dimension");
            }
            if matches!(kind, GenKind::PptState) {
                let tol = conekit::Tolerance::default();
                if !is_ppt_state(&state, &tol)?.is_in() {
                    bail!("generated ppt-state failed its partial-transpose self-check");
                }
            }
        }
    }
    Ok(())
}

fn cmd_check(
    path: &Path,
    cone: Option<&str>,
    ppt: bool,
    separable: bool,
    cfg: &OracleConfig,
    seed: u64,
) -> Result<u8> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let (target, verdict, decomposition) = if let Some(name) = cone {
        let k = ConeId::from_str(name)?;
        let map: QuantumMap =
            serde_json::from_str(&raw).context("input is not a map ({n, choi})")?;
        let v = membership(&map, &k, cfg, seed)?;
        (format!("cone:{k}"), v, None)
    } else if ppt {
        let state: StateFunctional =
            serde_json::from_str(&raw).context("input is not a state ({n, density})")?;
        let v = is_ppt_state(&state, &cfg.tol)?;
        ("ppt".to_string(), v, None)
    } else if separable {
        let state: StateFunctional =
            serde_json::from_str(&raw).context("input is not a state ({n, density})")?;
        let (v, d) = is_separable(&state, cfg, seed)?;
        ("separable".to_string(), v, d)
    } else {
        bail!("pass one of --cone NAME, --ppt, --separable");
    };
    let code = if verdict.is_in() {
        0u8
    } else if verdict.is_out() {
        1
    } else {
        3
    };
    let mut out = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "target": target,
        "verdict": verdict,
    });
    if let Some(d) = decomposition {
        out["decomposition"] = serde_json::to_value(&d)?;
    }
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(code)
}

fn cmd_verify(
    suites: &[String],
    all: bool,
    n: Option<usize>,
    trials: Option<usize>,
    seed: u64,
) -> Result<u8> {
    let ids: Vec<String> = if all {
        ALL_SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        suites.to_vec()
    };
    if ids.is_empty() {
        bail!("name at least one suite or pass --all (known: {})", ALL_SUITES.join(", "));
    }
    let dims: Vec<usize> = match n {
        Some(d) => vec![d],
        None if all => vec![2, 3],
        None => vec![2],
    };
    let mut reports = Vec::new();
    for d in &dims {
        for id in &ids {
            let t = trials.unwrap_or_else(|| default_trials(id));
            reports.push(run_suite(id, *d, t, seed)?);
        }
    }
    let pass = reports.iter().all(|r| r.pass);
    let out = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "pass": pass,
        "reports": reports,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if pass { 0 } else { 1 })
}

fn cmd_report(
    which: &str,
    path: &Path,
    cone: Option<&str>,
    cfg: &OracleConfig,
    seed: u64,
) -> Result<u8> {
    let raw = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let state: StateFunctional =
        serde_json::from_str(&raw).context("input is not a state ({n, density})")?;
    let (consistent, report) = match which {
        "t10" => {
            let k = ConeId::from_str(cone.context("report t10 requires --cone")?)?;
            let r = theorem10_check(&state, &k, cfg, seed)?;
            (r.consistent, serde_json::to_value(&r)?)
        }
        "t11" => {
            if cone.is_some() {
                bail!("--cone only applies to t10");
            }
            let r = theorem11_check(&state, cfg, seed)?;
            (r.consistent, serde_json::to_value(&r)?)
        }
        other => bail!("unknown report {other:?} (expected t10 or t11)"),
    };
    let out = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "report": report,
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(if consistent { 0 } else { 1 })
}
