//! Tri-state verdicts and numerical tolerances shared by every oracle.

use serde::{Deserialize, Serialize};

use crate::mat::ComplexMatrix;

/// Absolute and relative tolerances for spectral cutoffs and residual checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs_eps: 1e-9,
            rel_eps: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Self {
        assert!(
            abs_eps.is_finite() && abs_eps >= 0.0 && rel_eps.is_finite() && rel_eps >= 0.0,
            "tolerances must be finite and nonnegative"
        );
        Tolerance { abs_eps, rel_eps }
    }

    /// Cutoff scaled by the magnitude of the operand: `abs_eps * max(1, norm)`.
    pub fn spectral_cutoff(&self, norm: f64) -> f64 {
        self.abs_eps * norm.max(1.0)
    }

    /// Two-sided closeness test `|a - b| <= abs_eps + rel_eps * max(|a|, |b|)`.
    pub fn close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs_eps + self.rel_eps * a.abs().max(b.abs())
    }
}

/// Decision state of a membership oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerdictState {
    In,
    Out,
    Unknown,
}

/// Tri-state oracle answer. `Out` always carries a certificate; `In` may be
/// exact (spectral tests) or heuristic (multi-start searches), which the
/// caller distinguishes by the oracle, not the verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub state: VerdictState,
    /// Scalar margin: min eigenvalue, best objective found, residual, or
    /// minimum pairing, depending on the oracle.
    pub margin: f64,
    /// Witness for `Out` (violating vector as an n x 1 column, or a matrix).
    #[serde(rename = "witness", skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<ComplexMatrix>,
}

impl Verdict {
    pub fn decided_in(margin: f64) -> Self {
        Verdict {
            state: VerdictState::In,
            margin,
            certificate: None,
        }
    }

    /// Callers pass the witness either bare or already wrapped in `Some`;
    /// every oracle in this crate attaches one.
    pub fn decided_out(margin: f64, certificate: impl Into<Option<ComplexMatrix>>) -> Self {
        Verdict {
            state: VerdictState::Out,
            margin,
            certificate: certificate.into(),
        }
    }

    pub fn unknown(margin: f64) -> Self {
        Verdict {
            state: VerdictState::Unknown,
            margin,
            certificate: None,
        }
    }

    pub fn is_in(&self) -> bool {
        self.state == VerdictState::In
    }

    pub fn is_out(&self) -> bool {
        self.state == VerdictState::Out
    }

    pub fn is_unknown(&self) -> bool {
        self.state == VerdictState::Unknown
    }

    /// True when both verdicts are decided and disagree.
    pub fn contradicts(&self, other: &Verdict) -> bool {
        (self.is_in() && other.is_out()) || (self.is_out() && other.is_in())
    }
}
