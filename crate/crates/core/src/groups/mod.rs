//! Finite group models: averaging operators `π(k_K)` over subgroups, simplex
//! families built from them, coset link graphs, and the numerical checks
//! tying link spectra to those operators.
//!
//! Haar measure is counting measure, so `k_K = χ_K/|K|` and `π(k_K)` is an
//! exact projection. For finite groups every representation has the
//! absorption property `π(k_K)π(g) = π(k_K)` for `g ∈ K`, which is what makes
//! the resulting families consistent.

mod bridge;
mod family;
mod group;
mod models;
mod rep;

pub use bridge::{coset_link_graph, lp_angle_sweep, pi_f_bound_check, schatten_link_bound_check, AngleRow, PiFReport, SchattenReport};
pub use family::{absorption_residual, averaging_operator, build_simplex_family, SubgroupFamily};
pub use group::{dihedral_group, dihedral_reflections, parse_cycles, symmetric_group, FiniteGroup, Subgroup, MAX_GROUP_ORDER};
pub use models::{d4_model, model, s3_model, s4_model, GroupModel, MODEL_NAMES};
pub use rep::{GroupRep, RepKind};

#[cfg(test)]
mod tests;
