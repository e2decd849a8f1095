//! Numerical tolerances shared by every module.
//!
//! Each value here is the default used by the library operations. Reports
//! embed the full record so that a run can be reproduced with the exact
//! thresholds it used.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative symmetry tolerance accepted by the symmetric eigensolver.
    pub symmetry: f64,
    /// Relative singular-value threshold separating zero from nonzero.
    pub rank: f64,
    /// Idempotency and basis-action tolerance for projections.
    pub projection: f64,
    /// Largest condition number accepted for an image/kernel basis pair.
    pub max_condition: f64,
    /// Cauchy stopping tolerance for the averaged-projections iteration.
    pub iteration: f64,
    /// Iteration cap for the averaged-projections iteration.
    pub max_iterations: usize,
    /// Slack added to the convergence-certificate bound.
    pub certificate_slack: f64,
    /// Threshold for the canonical-limit comparison.
    pub canonical: f64,
    /// Pass/fail threshold for the consistency check.
    pub consistency: f64,
    /// Truncation tolerance for the decomposition tree series.
    pub tree_series: f64,
    /// Eigenvalues at or below this count as zero when extracting kappa.
    pub kappa_zero: f64,
    /// Random restarts for lp norm power iteration.
    pub norm_restarts: usize,
    /// Angular mesh step (radians) for the small-dimension norm bracket.
    pub mesh_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            symmetry: 1e-10,
            rank: 1e-8,
            projection: 1e-8,
            max_condition: 1e8,
            iteration: 1e-12,
            max_iterations: 20_000,
            certificate_slack: 1e-9,
            canonical: 1e-6,
            consistency: 1e-7,
            tree_series: 1e-10,
            kappa_zero: 1e-9,
            norm_restarts: 8,
            mesh_step: 0.01,
        }
    }
}
