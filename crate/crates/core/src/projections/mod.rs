//! Projections, the angle between two projections and the averaged
//! projections iteration with its convergence certificate.

mod angle;
mod averaging;
mod constants;
mod projection;

pub use angle::{max_estimate, pair_angle, pair_angle_estimate};
pub use averaging::{
    average, averaged_iteration, averaged_iteration_with, canonical_check, AveragedOutcome, CanonicalVerdict, Certificate,
};
pub use constants::{
    beta_limit, corollary_bound, corollary_rate, find_beta0_gamma0, gamma_limit, theorem_constants, CorollaryConstants,
    RateConstants,
};
pub use projection::Projection;

#[allow(unused_imports)]
pub(crate) use averaging::iterate_powers;
#[allow(unused_imports)]
pub(crate) use projection::{cheap_upper_norm, residual_norm};
