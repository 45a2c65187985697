//! Numerical kernels for confined-flux interference experiments.
//!
//! The crate computes, from first principles and in SI units:
//!
//! * vector potentials of confined flux sources (ideal solenoid in closed
//!   form, finite solenoids and toroids by volume quadrature), with
//!   finite-difference verification of ∇×A = B₀ and the Coulomb gauge;
//! * the superimposed energy W′ = ∫(1/μ₀)B₀·B₁ between the confined field
//!   and the field of external charges or currents, along independent
//!   routes that must agree — and measurably stop agreeing under gauge
//!   shifts or superconducting shields;
//! * interference-phase predictions for a two-beam experiment under the
//!   competing flux-law and energy-accumulation hypotheses, including
//!   shielded configurations where the two disagree;
//! * critical-current tables for a half-shielded SQUID, the proposed
//!   discriminating measurement;
//! * wave-packet pulse analysis against the superconductor energy gap,
//!   which decides whether a shield acts at all.
//!
//! Everything is deterministic: fixed subdivision orders, compensated
//! sums, and no clocks or threads in the numerics, so identical inputs
//! produce bit-identical outputs.

// Validation deliberately writes `!(x > 0.0)` so NaN fails the check too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constants;
pub mod energy;
pub mod error;
pub mod fields;
pub mod interference;
pub mod model;
pub mod quadrature;
pub mod shielding;
pub mod squid;
pub mod vec3;

pub use error::{Error, Result};
pub use vec3::Vec3;
