use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::family::{averaging_operator, SubgroupFamily};
use crate::groups::group::{FiniteGroup, Subgroup};
use crate::groups::rep::{GroupRep, RepKind};
use crate::linalg::{operator_norm, schatten_norm, tensor_block_norm, Matrix, NormContext, NormEstimate};
use crate::projections::pair_angle_estimate;
use crate::simplex::Face;
use crate::spectra::{b_delta_r, BipartiteGraph};

/// Bipartite graph on the left cosets of `k1` and `k2` inside `ambient`,
/// with an edge whenever two cosets meet.
pub fn coset_link_graph(group: &FiniteGroup, k1: &Subgroup, k2: &Subgroup, ambient: &Subgroup) -> Result<BipartiteGraph> {
    let ambient = group.subgroup(ambient.elements())?;
    for (name, k) in [("K1", k1), ("K2", k2)] {
        let k = group.subgroup(k.elements())?;
        if !k.is_subset(&ambient) {
            return Err(Error::Subgroup(format!("{name} is not contained in the ambient subgroup")));
        }
    }
    let c1 = group.left_cosets(k1, &ambient);
    let c2 = group.left_cosets(k2, &ambient);
    let mut owner2 = vec![usize::MAX; group.order()];
    for (j, c) in c2.iter().enumerate() {
        for &g in c {
            owner2[g] = j;
        }
    }
    let mut edges = BTreeSet::new();
    for (i, c) in c1.iter().enumerate() {
        for &g in c {
            edges.insert((i, owner2[g]));
        }
    }
    BipartiteGraph::new(c1.len(), c2.len(), edges.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchattenReport {
    pub r: f64,
    /// `‖λ(k₁)λ(k₂) − λ(k_ambient)‖` in the Schatten `r`-norm on `ℓ²(ambient)`.
    pub lhs: f64,
    /// `(1 − κ)·V_min^{1/r}` of the coset link graph.
    pub rhs: f64,
    pub kappa: f64,
    pub v_min: usize,
    pub holds: bool,
}

/// Compares the Schatten norm of `λ(k₁)λ(k₂) − λ(k_ambient)` in the regular
/// representation of `ambient` with the link quantity of its coset graph.
pub fn schatten_link_bound_check(
    rep: &GroupRep,
    k1: &Subgroup,
    k2: &Subgroup,
    ambient: &Subgroup,
    r: f64,
) -> Result<SchattenReport> {
    if rep.kind() != RepKind::Regular {
        return Err(Error::domain("the Schatten link check needs the left regular representation"));
    }
    let group = rep.group();
    let graph = coset_link_graph(group, k1, k2, ambient)?;
    // λ_ambient(g) is the block of λ_G(g) on the ambient indices
    let idx = ambient.elements();
    let average = |k: &Subgroup| {
        let mut m = Matrix::zeros(idx.len(), idx.len());
        let w = 1.0 / k.order() as f64;
        for &g in k.elements() {
            let full = rep.matrix(g);
            for (a, &x) in idx.iter().enumerate() {
                for (b, &y) in idx.iter().enumerate() {
                    m[(a, b)] += w * full[(x, y)];
                }
            }
        }
        m
    };
    let diff = &(&average(k1) * &average(k2)) - &average(ambient);
    let lhs = schatten_norm(&diff, r)?;
    let spec = b_delta_r(&graph, r)?;
    Ok(SchattenReport { r, lhs, rhs: spec.b_value, kappa: spec.kappa, v_min: spec.v_min, holds: lhs <= spec.b_value + 1e-9 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiFReport {
    /// `‖π(f)‖` in the representation's norm.
    pub lhs: NormEstimate,
    pub sup_norm: f64,
    /// `‖(λ ⊗ id)(f)‖` on `ℓ²(G; E)`.
    pub block_norm: NormEstimate,
    /// `sup_norm² · block_norm`.
    pub bound: f64,
    /// `None` when the estimates are too loose to decide.
    pub holds: Option<bool>,
}

/// Compares `‖π(f)‖` with `(sup_g ‖π(g)‖)² ‖(λ ⊗ id_E)(f)‖`.
pub fn pi_f_bound_check(rep: &GroupRep, f: &[f64]) -> Result<PiFReport> {
    let lhs = operator_norm(&rep.apply(f)?, rep.ctx());
    let lambda = GroupRep::regular(rep.group(), rep.ctx()).apply(f)?;
    let block_norm = tensor_block_norm(&lambda, rep.dim(), rep.ctx())?;
    let sup = rep.sup_norm_bound();
    let bound = sup * sup * block_norm.value;
    let bound_lo = sup * sup * block_norm.lower();
    let bound_hi = block_norm.upper().map(|u| sup * sup * u);
    let lhs_hi = lhs.upper();
    let holds = if lhs_hi.is_some_and(|u| u <= bound_lo + 1e-9) {
        Some(true)
    } else if bound_hi.is_some_and(|u| lhs.lower() > u + 1e-9) {
        Some(false)
    } else {
        None
    };
    Ok(PiFReport { lhs, sup_norm: sup, block_norm, bound, holds })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleRow {
    pub p: f64,
    pub a: Face,
    pub b: Face,
    pub angle: NormEstimate,
}

/// Pairwise angles between the codimension-one averaging operators, with
/// each representation matrix measured in `ℓp` for every requested `p`.
/// The Hilbert column is always included.
pub fn lp_angle_sweep(rep: &GroupRep, fam: &SubgroupFamily, ps: &[f64]) -> Result<Vec<AngleRow>> {
    let mut ps: Vec<f64> = ps.to_vec();
    if !ps.contains(&2.0) {
        ps.insert(0, 2.0);
    }
    let group = rep.group();
    let faces: Vec<(Face, &Subgroup)> = fam.codim1().iter().map(|(f, k)| (*f, k)).collect();
    let per_p: Vec<Result<Vec<AngleRow>>> = ps
        .par_iter()
        .map(|&p| {
            let rep = rep.with_ctx(NormContext::new(p)?);
            let mut rows = Vec::new();
            for (i, (fa, ka)) in faces.iter().enumerate() {
                for (fb, kb) in &faces[i + 1..] {
                    let pa = averaging_operator(&rep, ka)?;
                    let pb = averaging_operator(&rep, kb)?;
                    let pab = averaging_operator(&rep, &group.join(&[ka, kb]))?;
                    rows.push(AngleRow { p, a: *fa, b: *fb, angle: pair_angle_estimate(&pa, &pb, &pab)? });
                }
            }
            Ok(rows)
        })
        .collect();
    Ok(per_p.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect())
}
