//! Integration surface of the verification suites: the documented example
//! invocations, the full battery at default trial counts, and the error
//! contract for unknown suites and unsupported dimensions.

use conekit::verify::{default_trials, run_suite, ALL_SUITES};
use conekit::Error;

#[test]
fn documented_example_invocations() {
    let r = run_suite("L3", 3, 200, 42).unwrap();
    assert!(r.pass, "L3 at n = 3: {:?}", r.failures.first());

    let r = run_suite("CHOI", 2, 100, 7).unwrap();
    assert!(r.pass, "CHOI at n = 2: {:?}", r.failures.first());

    let r = run_suite("T10", 2, 50, 1).unwrap();
    assert!(r.pass, "T10 at n = 2: {:?}", r.failures.first());
    assert!(r.failures.is_empty());
}

#[test]
fn full_battery_passes_at_default_trials() {
    for n in [2usize, 3] {
        for suite in ALL_SUITES {
            let r = run_suite(suite, n, default_trials(suite), 42).unwrap();
            assert!(
                r.pass,
                "suite {suite} at n = {n} failed: {:?}",
                r.failures.first().map(|f| (&f.description, f.seed))
            );
            assert_eq!(r.version, env!("CARGO_PKG_VERSION"));
            assert!(!r.header.is_empty());
        }
    }
}

#[test]
fn unknown_suite_and_bad_dimension_are_errors() {
    assert!(matches!(
        run_suite("NOPE", 2, 10, 1),
        Err(Error::UnknownSuite(_))
    ));
    assert!(matches!(run_suite("L3", 1, 10, 1), Err(Error::Unsupported(_))));
    assert!(matches!(run_suite("L3", 5, 10, 1), Err(Error::Unsupported(_))));
}

#[test]
fn reports_are_reproducible_across_processes_at_fixed_seed() {
    // Failure lists and notes depend only on (suite, n, trials, seed); the
    // elapsed time is the single nondeterministic field.
    for suite in ["L3", "T11", "R-DEC"] {
        let a = run_suite(suite, 2, 20, 99).unwrap();
        let b = run_suite(suite, 2, 20, 99).unwrap();
        assert_eq!(
            serde_json::to_string(&a.failures).unwrap(),
            serde_json::to_string(&b.failures).unwrap()
        );
        assert_eq!(a.notes, b.notes);
    }
}

#[test]
fn smoke_battery_at_n4() {
    for suite in ["L3", "L4a", "L4b", "TT", "CHOI"] {
        let r = run_suite(suite, 4, 8, 5).unwrap();
        assert!(r.pass, "suite {suite} at n = 4");
    }
}
