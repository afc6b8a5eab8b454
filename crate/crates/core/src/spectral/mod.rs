//! Galerkin discretization of the operators `L_m`, constrained eigen
//! solves, spectral gap certification and the identities relating
//! different isotypical spaces.

mod frobenius;
mod gap;
mod homotopy;
mod identities;
mod solve;
mod system;

pub use frobenius::{frobenius, FrobeniusReport};
pub use gap::{
    gap_check, gap_report, match_trivial, refinement_difference, summarize, GapReport, GapSummary,
    TrivialMatch, TrivialTarget, AMBIGUITY_ANGLE, DEFAULT_BASIS_SIZE, DEFAULT_GAP_TOLERANCE,
    REPORTED_NONTRIVIAL,
};
pub use homotopy::{
    ball_f0, homotopy_point, homotopy_scan, subspace_labels, HomotopyPoint, HomotopyScan,
};
pub use identities::{
    cs_bound_check, orthogonal_space_identity, CsBoundReport, OrthogonalSpaceIdentity,
    REFINEMENT_TOLERANCE,
};
pub use solve::{solve, Spectrum};
pub use system::{assemble, potential, GalerkinSystem, MIN_BASIS_SIZE};
