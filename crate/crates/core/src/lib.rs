//! Forge and verify matrices with prescribed GMRES behaviour.
//!
//! Given a nonincreasing GMRES residual-norm schedule and an admissible set of
//! harmonic Ritz values (one tuple per step), this crate builds an upper
//! Hessenberg matrix `H` such that GMRES applied to `{H, e₁}` reproduces both
//! exactly. The construction factors `H = QR`: the unitary Hessenberg `Q` is
//! fixed by the residual norms ([`qbuild`]), and the upper triangular `R` is
//! built column by column so that `det(R_k − θ Q_k*) = 0` for every prescribed
//! value at step `k` ([`rbuild`]).
//!
//! [`krylov`] provides the independent check: Arnoldi, GMRES residual
//! histories and harmonic Ritz extraction for arbitrary `{A, b}`.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![deny(missing_docs)]

extern crate alloc;

mod error;
pub mod krylov;
pub mod linalg;
pub mod prescription;
pub mod qbuild;
pub mod rbuild;

pub use error::{Error, Result};
pub use krylov::{
    analyze, arnoldi, gmres_history, harmonic_ritz, verify, AnalysisReport, ArnoldiDecomposition,
    StepDetail, Verdict, VerifyReport,
};
pub use linalg::{Matrix, C64};
pub use prescription::{
    random_prescription, validate, AdmissibilityReport, HarmonicRitzValue, Prescription,
    ResidualSchedule, RitzPrescription, Violation, ViolationKind,
};
pub use qbuild::{
    complete_q, first_row_from_residuals, residuals_from_q, stagnation_steps, UnitaryHessenberg,
};
pub use rbuild::{det_affine_coeffs, forge, prescribe_column, AffineDetCoeffs, ForgeResult};
