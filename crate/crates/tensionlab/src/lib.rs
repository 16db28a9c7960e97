//! tensionlab: a finite-dimensional quantum measurement engine.
//!
//! The crate models projective measurement from the ground up — Hermitian
//! spectral decomposition, Born-rule outcome distributions, sequential
//! measurement chains — and puts quantum correlations side by side with two
//! independent classical oracles: exhaustive deterministic-strategy
//! enumeration and joint-distribution LP feasibility. The canonical CHSH,
//! KCBS, Leggett-Garg, Mermin-Peres and GHZ scenarios ship as builders and
//! as loadable scenario documents.

pub mod builders;
pub mod demo;
pub mod doc;
pub mod eigen;
pub mod entangle;
pub mod error;
pub mod joint;
pub mod matrix;
pub mod measurement;
pub mod observable;
pub mod report;
pub mod scenario;
pub mod simplex;
pub mod state;
pub mod tension;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use matrix::ComplexMatrix;
pub use observable::Observable;
pub use state::StateVector;
