//! Projection families indexed by the faces of a simplex.
//!
//! A [`SimplexFamily`] holds `P_Δ` and one projection per codimension-one
//! face. For smaller faces `τ`, `P_τ` is the limit of powers of the average
//! of the `P_σ` with `σ ⊇ τ`, so larger faces carry larger images and
//! `P_∅` projects onto the common intersection. On top of the family this
//! module measures multi-projection angles, checks consistency
//! (`P_τ P_σ = P_τ` for `τ ⊆ σ`) and the small-angle conclusions, and
//! decomposes `X_η = Im P_η` into the summands
//! `X^τ = X_τ ∩ ⋂_{τ' ⊊ τ} Ker P_τ'` in two independent ways.

mod angles;
mod decompose;
mod face;
mod family;
pub mod synth;

pub use angles::{
    almost_commutativity, angle_no_consistency, consistency_check, multi_angle, small_angle_verify, ConsistencyReport,
    SmallAngleReport, PERMUTATION_CAP,
};
pub use decompose::{decompose_oracle, decompose_tree, DecompositionResult, LevelDiagnostics, Method};
pub use face::{codim1_faces, faces_of_dim, Face, MAX_SIMPLEX_DIM};
pub use family::{FaceLimit, FaceSummary, SimplexFamily};

#[cfg(test)]
mod tests;
