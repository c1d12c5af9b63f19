//! conekit: Choi-matrix calculus for positive maps on matrix algebras.
//!
//! The library represents linear maps on B(H) by their Choi matrices, carries
//! linear functionals on B(H (x) H) by density operators, and offers tri-state
//! (In / Out-with-certificate / Unknown) membership oracles for the standard
//! cones of maps: completely positive, copositive, their intersection, all
//! positive maps, superpositive (entanglement breaking), and decomposable.
//! A seeded verification harness re-derives the structural identities the
//! implementation relies on as reproducible pass/fail suites.
//!
//! Everything is desk-scale by design (dim H between 2 and 4, dense matrices,
//! double precision); decidable questions are answered spectrally, NP-hard
//! ones honestly, with certificates for every Out and no fabricated In.

pub mod cones;
pub mod error;
pub mod maps;
pub mod mat;
pub mod rng;
pub mod states;
pub mod verdict;
pub mod verify;

pub use error::{Error, Result};
pub use mat::ComplexMatrix;
pub use verdict::{Tolerance, Verdict, VerdictState};
