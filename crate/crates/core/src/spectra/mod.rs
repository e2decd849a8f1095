//! Bipartite link graphs and the quantity `(1 − κ)·V_min^{1/r}`, where `κ`
//! is the smallest positive eigenvalue of the normalized Laplacian and
//! `V_min` the size of the smaller part.

mod field;
mod generators;
mod graph;
mod report;

pub use field::{FiniteField, SUPPORTED_ORDERS};
pub use generators::{gq2_graph, projective_plane_graph, symplectic_quadrangle_graph};
pub use graph::{complete_bipartite, even_cycle, BipartiteGraph, KAPPA_ZERO};
pub use report::{
    b_delta_r, b_value, mgon_graph, mgon_vmin, sweep_orders, thickness_threshold, MgonParams, SpectralReport, SweepRow,
    ThresholdReport,
};
