//! Finite-dimensional K-bi-g-frames.
//!
//! A system is a pair of operator families `Φ_i, Ψ_i : C^n -> C^{d_i}` with
//! an operator `K` on `C^n`. The crate computes the biframe operator
//! `S = Σ Ψ_i* Φ_i`, its optimal frame bounds relative to `K`, classifies the
//! system, and checks the known transform and perturbation results
//! numerically on concrete and seeded random instances.

pub mod cli;
pub mod error;
pub mod family;
pub mod frame;
pub mod instances;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod stability;
pub mod suites;
pub mod transforms;

pub use error::{Error, Result};
pub use family::{BiGFrameSystem, DirectSumVector, GOperatorFamily};
pub use frame::{
    biframe_operator, classify, g_frame_operator_and_bessel, optimal_bounds, psd_gap,
    quadratic_form, sqrt_factor, ClassificationReport, FrameBounds, Verdict,
};
pub use linalg::{ComplexVector, OperatorMatrix, SpectralTolerance, C64};
