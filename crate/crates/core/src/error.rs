use alloc::string::String;
use alloc::vec::Vec;

use crate::prescription::Violation;

/// Errors raised by the construction and verification routines.
///
/// Step and index fields are 1-based.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input has the wrong shape or structure (non-square, not Hessenberg, ...).
    #[error("structural error: {0}")]
    Structural(String),
    /// Bad argument to a generator or driver.
    #[error("argument error: {0}")]
    Argument(String),
    /// Shifted QR failed to deflate within the iteration budget.
    #[error("eigenvalue iteration did not converge after {iterations} sweeps")]
    Convergence {
        /// Number of QR sweeps performed.
        iterations: usize,
    },
    /// LU elimination met a pivot below the singularity threshold.
    #[error("singular system: negligible pivot at index {pivot}")]
    SingularSystem {
        /// Offending pivot position.
        pivot: usize,
    },
    /// Upper triangular matrix with a negligible diagonal entry.
    #[error("singular triangular matrix: negligible diagonal at index {index}")]
    SingularTriangular {
        /// Offending diagonal position.
        index: usize,
    },
    /// The prescription failed admissibility checks.
    #[error("prescription is not admissible ({} violation(s))", .0.len())]
    Admissibility(Vec<Violation>),
    /// Residual norms reach zero before the last step, so Arnoldi would break down.
    #[error("residual budget exhausted before step {step}")]
    PrematureTermination {
        /// First step whose remaining residual is zero.
        step: usize,
    },
    /// A matrix that should be unitary irreducible Hessenberg is not.
    #[error("not a unitary irreducible Hessenberg matrix: {0}")]
    NotUnitaryHessenberg(String),
    /// The linear system for the new column of `R` is singular.
    #[error("degenerate prescription at step {step}: determinant system is singular")]
    DegeneratePrescription {
        /// Step whose system could not be solved.
        step: usize,
    },
    /// The solved column produced a vanishing diagonal entry of `R`.
    #[error("constructed R is singular at step {step}")]
    SingularR {
        /// Step whose diagonal entry vanished.
        step: usize,
    },
    /// Two independent computations of the same quantity disagree.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Crate result alias.
pub type Result<T> = core::result::Result<T, Error>;
