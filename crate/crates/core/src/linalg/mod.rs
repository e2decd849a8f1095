//! Dense real linear algebra.

mod eigen;
mod matrix;
mod norms;
mod solve;
mod svd;

pub use eigen::{sym_eigen, sym_eigen_with, SymEigen};
pub use matrix::Matrix;
pub use norms::{
    block_lower_bound, lp_norm, mesh_bracket, norm_value, operator_norm, operator_norm_with, power_lower_bound,
    schatten_norm, schur_upper_bound, spectral_norm, tensor_block_norm, NormContext, NormEstimate, NormKind,
    BLOCK_ENUMERATION_MAX, DEFAULT_RESTARTS, DEFAULT_SEED,
};
pub use solve::{inverse, solve};
pub use svd::{intersect, null_space, orthonormalize, svd, Basis, Svd};
