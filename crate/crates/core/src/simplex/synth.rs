//! Seeded test families with known pairwise angles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Basis, Matrix, NormContext};
use crate::projections::Projection;
use crate::simplex::family::SimplexFamily;

/// Commuting family of diagonal 0/1 projections on `ℝ^dim` with
/// `P_Δ = I`. Each coordinate is kept by a seeded subset of the
/// codimension-one faces.
pub fn commuting_family(n: usize, dim: usize, seed: u64) -> Result<SimplexFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut diags = vec![vec![0.0; dim]; n + 1];
    for k in 0..dim {
        for d in diags.iter_mut() {
            d[k] = if rng.gen_bool(0.5) { 1.0 } else { 0.0 };
        }
    }
    let ctx = NormContext::HILBERT;
    let codim1 = diags
        .iter()
        .map(|d| Projection::from_matrix(Matrix::diag(d), ctx))
        .collect::<Result<Vec<_>>>()?;
    SimplexFamily::new(Projection::identity(dim, ctx), codim1)
}

/// Orthogonal family on a sum of 2×2 and 1×1 blocks with `P_Δ = I`.
///
/// On every 2×2 block two distinct codimension-one faces are lines whose
/// directions have inner product `gamma`, and the remaining faces act as
/// `0` or `I`. On 1×1 blocks every face acts as `0` or `1`. The largest
/// pairwise angle is therefore `gamma` (given at least one 2×2 block).
pub fn near_orthogonal_family(n: usize, planes: usize, lines: usize, gamma: f64, seed: u64) -> Result<SimplexFamily> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::domain(format!("gamma must lie in [0, 1), got {gamma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * planes + lines;
    let mut mats = vec![Matrix::zeros(dim, dim); n + 1];
    let faces: Vec<usize> = (0..=n).collect();
    for b in 0..planes {
        let o = 2 * b;
        let pair: Vec<usize> = faces.choose_multiple(&mut rng, 2).copied().collect();
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let u = [phi.cos(), phi.sin()];
        // v at angle arccos(gamma) from u
        let theta = phi + gamma.acos() * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let v = [theta.cos(), theta.sin()];
        for (f, m) in mats.iter_mut().enumerate() {
            let block = if f == pair[0] {
                outer(u)
            } else if f == pair[1] {
                outer(v)
            } else if rng.gen_bool(0.5) {
                [[1.0, 0.0], [0.0, 1.0]]
            } else {
                [[0.0; 2]; 2]
            };
            for i in 0..2 {
                for j in 0..2 {
                    m[(o + i, o + j)] = block[i][j];
                }
            }
        }
    }
    for k in 2 * planes..dim {
        for m in mats.iter_mut() {
            m[(k, k)] = if rng.gen_bool(0.6) { 1.0 } else { 0.0 };
        }
    }
    let ctx = NormContext::HILBERT;
    let codim1 = mats.into_iter().map(|m| Projection::from_matrix(m, ctx)).collect::<Result<Vec<_>>>()?;
    SimplexFamily::new(Projection::identity(dim, ctx), codim1)
}

fn outer(u: [f64; 2]) -> [[f64; 2]; 2] {
    [[u[0] * u[0], u[0] * u[1]], [u[1] * u[0], u[1] * u[1]]]
}

/// Replaces every codimension-one projection by the oblique projection
/// with the same image and a kernel spanned by the original kernel basis
/// plus seeded noise of size `noise`. Images, and so all intersections,
/// are unchanged; the absorption identities break at the noise scale.
/// `P_Δ` must be the identity.
pub fn perturbed_family(family: &SimplexFamily, noise: f64, seed: u64) -> Result<SimplexFamily> {
    let dim = family.dim();
    if (family.top().op() - &Matrix::identity(dim)).max_abs() > 1e-12 {
        return Err(Error::domain("perturbation needs P_Δ = I"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = |b: &Basis| {
        Basis::new(
            dim,
            b.vectors()
                .iter()
                .map(|v| v.iter().map(|x| x + noise * rng.gen_range(-1.0..1.0)).collect())
                .collect(),
        )
    };
    let full = family.full();
    let mut codim1 = Vec::with_capacity(family.n() + 1);
    for i in 0..=family.n() {
        let p = &family.codim1()[&full.without(i)];
        let kernel = jitter(p.kernel_basis());
        codim1.push(Projection::from_bases(p.image_basis(), &kernel, family.ctx())?);
    }
    SimplexFamily::new(family.top().clone(), codim1)
}
