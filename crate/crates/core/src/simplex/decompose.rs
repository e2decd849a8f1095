//! Decomposition `X_η = ⊕_{τ ⊆ η} X^τ`, by the tree series and by direct
//! subspace intersection.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse, operator_norm, orthonormalize, svd, Basis, Matrix};
use crate::projections::Projection;
use crate::simplex::face::Face;
use crate::simplex::family::SimplexFamily;

/// Safety cap on tree-series depth beyond the certified estimate.
const EXTRA_DEPTH: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TreeSeries,
    Oracle,
}

/// Per-face record of one tree-series level.
#[derive(Debug, Clone, Serialize)]
pub struct LevelDiagnostics {
    pub face: Face,
    /// Number of labels minus one: `2^{|τ|} − 2`.
    pub d: usize,
    /// `max ‖R_τ'‖` over the labels.
    pub c: f64,
    /// `max_{τ' ≠ τ''} ‖R_τ' R_τ''‖ / C²`.
    pub epsilon: f64,
    /// `d C² ε`.
    pub rho: f64,
    pub certified_depth: usize,
    pub depth: usize,
    /// `‖Σ_{|x| = j} R(x)‖` for `j = 1..=depth`.
    pub level_norms: Vec<f64>,
    pub idempotency_residual: f64,
    /// `max ‖R_τ' L_τ‖` over labels `τ'`.
    pub annihilation_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionResult {
    pub eta: Face,
    pub method: Method,
    /// Basis of `X^τ` for every `τ ⊆ η`.
    pub summand_bases: BTreeMap<Face, Basis>,
    /// Projection onto `X^τ` for every `τ ⊆ η` where one was formed.
    pub r_ops: BTreeMap<Face, Matrix>,
    pub truncation_depth: Option<usize>,
    pub levels: Vec<LevelDiagnostics>,
    pub rank_eta: usize,
    pub rank_sum: usize,
    /// Condition number of the concatenated summand bases.
    pub condition: f64,
    /// Ranks add up and the concatenation is well conditioned.
    pub direct: bool,
}

fn summary(family: &SimplexFamily, eta: Face, bases: &BTreeMap<Face, Basis>) -> Result<(usize, usize, f64, bool)> {
    let tol = family.tolerances();
    let rank_eta = family.p_tau(eta)?.rank();
    let rank_sum: usize = bases.values().map(Basis::len).sum();
    let joint = bases.values().fold(Basis::empty(family.dim()), |acc, b| acc.join(b));
    let condition = joint.to_matrix().map_or(1.0, |m| svd(&m).condition());
    let direct = rank_sum == rank_eta && condition <= tol.max_condition;
    Ok((rank_eta, rank_sum, condition, direct))
}

fn image_of(op: &Matrix, rel: f64) -> Basis {
    let d = svd(op);
    d.range_basis_above(rel * d.largest().max(1.0))
}

/// Builds `R_τ` for all `τ ⊆ η` bottom-up: `R_∅ = P_∅`,
/// `R_τ = P_τ − P_∅` for single vertices and `R_τ = L_τ P_τ` above, where
/// `L_τ` sums `(−1)^j R_{τ_j} ⋯ R_{τ_1}` over words in the proper subfaces
/// of `τ` without repeated adjacent letters.
pub fn decompose_tree(family: &SimplexFamily, eta: Face, tol: f64) -> Result<DecompositionResult> {
    if !eta.is_subset(family.full()) {
        return Err(Error::domain(format!("{eta} is not a face of the {}-simplex", family.n())));
    }
    let ctx = family.ctx();
    let dim = family.dim();
    let id = Matrix::identity(dim);
    let p_empty = family.p_tau(Face::EMPTY)?;
    let mut r: BTreeMap<Face, Matrix> = BTreeMap::new();
    let mut levels = Vec::new();
    let mut faces = eta.subfaces();
    faces.sort_by_key(|f| (f.len(), *f));
    for face in faces {
        let op = match face.len() {
            0 => p_empty.op().clone(),
            1 => family.p_tau(face)?.op() - p_empty.op(),
            _ => {
                let (l, diag) = tree_series(face, &r, &id, ctx, tol)?;
                let op = &l * family.p_tau(face)?.op();
                let mut diag = diag;
                diag.idempotency_residual = (&(&op * &op) - &op).max_abs();
                levels.push(diag);
                op
            }
        };
        r.insert(face, op);
    }
    let rel = family.tolerances().rank;
    let summand_bases: BTreeMap<Face, Basis> = r.iter().map(|(f, op)| (*f, image_of(op, rel))).collect();
    let (rank_eta, rank_sum, condition, direct) = summary(family, eta, &summand_bases)?;
    let truncation_depth = levels.iter().map(|l| l.depth).max().or(Some(if eta.is_empty() { 0 } else { 1 }));
    Ok(DecompositionResult {
        eta,
        method: Method::TreeSeries,
        summand_bases,
        r_ops: r,
        truncation_depth,
        levels,
        rank_eta,
        rank_sum,
        condition,
        direct,
    })
}

fn tree_series(
    face: Face,
    r: &BTreeMap<Face, Matrix>,
    id: &Matrix,
    ctx: crate::linalg::NormContext,
    tol: f64,
) -> Result<(Matrix, LevelDiagnostics)> {
    let labels = face.proper_subfaces();
    let d = labels.len() - 1;
    let ops: Vec<&Matrix> = labels.iter().map(|t| &r[t]).collect();
    let c = ops.iter().map(|m| operator_norm(m, ctx).value).fold(0.0, f64::max);
    let mut q: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            if i != j {
                q = q.max(operator_norm(&(*a * *b), ctx).value);
            }
        }
    }
    let rho = d as f64 * q;
    let epsilon = if c > 0.0 { q / (c * c) } else { 0.0 };
    if rho >= 1.0 {
        return Err(Error::Inapplicable {
            rho,
            reason: format!("tree series for {face} needs d·C²·ε < 1"),
        });
    }
    // tail after depth J is at most (d+1)·C·ρ^J/(1−ρ)
    let certified_depth = if rho == 0.0 {
        1
    } else {
        let target = tol * (1.0 - rho) / ((d as f64 + 1.0) * c.max(1.0));
        ((target.ln() / rho.ln()).ceil().max(0.0) as usize + 1).max(1)
    };

    // a[k]: signed sum over words of the current length whose last letter is k
    let mut a: Vec<Matrix> = ops.iter().map(|m| m.scale(-1.0)).collect();
    let mut level = sum(&a, id.rows());
    let mut l = id + &level;
    let mut level_norms = vec![operator_norm(&level, ctx).value];
    let mut depth = 1;
    let cap = certified_depth + EXTRA_DEPTH;
    while depth < cap && (depth < certified_depth || level_norms[depth - 1] > tol) {
        let next: Vec<Matrix> = ops
            .iter()
            .zip(&a)
            .map(|(m, ak)| (*m * &(&level - ak)).scale(-1.0))
            .collect();
        a = next;
        level = sum(&a, id.rows());
        l = &l + &level;
        let norm = operator_norm(&level, ctx).value;
        level_norms.push(norm);
        depth += 1;
        if !norm.is_finite() || norm > 1e6 {
            return Err(Error::Inapplicable { rho, reason: format!("tree series for {face} diverges") });
        }
    }
    let annihilation_residual = ops.iter().map(|m| (*m * &l).max_abs()).fold(0.0, f64::max);
    Ok((
        l,
        LevelDiagnostics {
            face,
            d,
            c,
            epsilon,
            rho,
            certified_depth,
            depth,
            level_norms,
            idempotency_residual: 0.0,
            annihilation_residual,
        },
    ))
}

fn sum(ms: &[Matrix], n: usize) -> Matrix {
    ms.iter().fold(Matrix::zeros(n, n), |acc, m| &acc + m)
}

/// `X^τ = Im P_τ ∩ ⋂_{τ' ⊊ τ} Ker P_τ'` by subspace intersection, with the
/// projection onto `X^τ` along the other summands and `Ker P_τ` whenever
/// that sum is direct.
pub fn decompose_oracle(family: &SimplexFamily, eta: Face) -> Result<DecompositionResult> {
    if !eta.is_subset(family.full()) {
        return Err(Error::domain(format!("{eta} is not a face of the {}-simplex", family.n())));
    }
    let rel = family.tolerances().rank;
    let limits: BTreeMap<Face, Projection> =
        eta.subfaces().into_iter().map(|f| family.p_tau(f).map(|p| (f, p))).collect::<Result<_>>()?;
    let mut bases = BTreeMap::new();
    for &tau in limits.keys() {
        let mut parts = vec![limits[&tau].image_basis().clone()];
        parts.extend(tau.proper_subfaces().iter().map(|s| limits[s].kernel_basis().clone()));
        let b = if parts.iter().any(Basis::is_empty) {
            Basis::empty(family.dim())
        } else {
            orthonormalize(&crate::linalg::intersect(&parts, rel), rel)
        };
        bases.insert(tau, b);
    }
    let mut r_ops = BTreeMap::new();
    for &tau in limits.keys() {
        if let Some(op) = oracle_projection(&bases, &limits[&tau], tau, family.tolerances().max_condition) {
            r_ops.insert(tau, op);
        }
    }
    let (rank_eta, rank_sum, condition, direct) = summary(family, eta, &bases)?;
    Ok(DecompositionResult {
        eta,
        method: Method::Oracle,
        summand_bases: bases,
        r_ops,
        truncation_depth: None,
        levels: Vec::new(),
        rank_eta,
        rank_sum,
        condition,
        direct,
    })
}

/// `W E W⁻¹` with `W = [X^τ | X^τ' for τ' ⊊ τ | Ker P_τ]` and `E` keeping
/// the `X^τ` block.
fn oracle_projection(bases: &BTreeMap<Face, Basis>, p: &Projection, tau: Face, max_condition: f64) -> Option<Matrix> {
    let own = &bases[&tau];
    let mut w = own.clone();
    for s in tau.proper_subfaces() {
        w = w.join(&bases[&s]);
    }
    let w = w.join(p.kernel_basis());
    let n = p.dim();
    if w.len() != n {
        return None;
    }
    let wm = w.to_matrix()?;
    if svd(&wm).condition() > max_condition {
        return None;
    }
    let mut e = Matrix::zeros(n, n);
    for i in 0..own.len() {
        e[(i, i)] = 1.0;
    }
    Some(&(&wm * &e) * &inverse(&wm).ok()?)
}
