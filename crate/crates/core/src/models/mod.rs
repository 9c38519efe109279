//! Solvable models where the φ-expansion degenerates or is marginal.

pub mod harmonic_delta;
pub mod triple_delta;

pub use harmonic_delta::{harmonic_delta_phi, harmonic_delta_splitting, regulated_f_diff, HarmonicDeltaSpec, RegulatedDiff};
pub use triple_delta::{solve_kappa, triple_delta_chi_check, ChiCheck, TripleDeltaSolution, TripleDeltaSpec};
