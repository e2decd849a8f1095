use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix};
use crate::simplex::face::Face;
use crate::simplex::family::SimplexFamily;

/// Most faces accepted by [`multi_angle`]: 7! = 5040 orderings.
pub const PERMUTATION_CAP: usize = 7;

/// `max_π ‖P_{σ_π(0)} ⋯ P_{σ_π(k)} (I − P_τ)‖` with `τ = ⋂ σ_i`.
pub fn multi_angle(family: &SimplexFamily, sigmas: &[Face]) -> Result<f64> {
    if sigmas.len() > PERMUTATION_CAP {
        return Err(Error::PermutationCap { requested: sigmas.len(), cap: PERMUTATION_CAP });
    }
    if sigmas.is_empty() {
        return Err(Error::domain("multi-angle needs at least one face"));
    }
    for (i, s) in sigmas.iter().enumerate() {
        if !family.codim1().contains_key(s) {
            return Err(Error::domain(format!("{s} is not a codimension-one face")));
        }
        if sigmas[..i].contains(s) {
            return Err(Error::domain(format!("face {s} repeated")));
        }
    }
    let tau = sigmas.iter().fold(family.full(), |acc, s| acc.intersection(*s));
    let complement = &Matrix::identity(family.dim()) - family.p_tau(tau)?.op();
    let ops: Vec<&Matrix> = sigmas.iter().map(|s| family.codim1()[s].op()).collect();
    let mut order: Vec<usize> = (0..ops.len()).collect();
    let mut best: f64 = 0.0;
    loop {
        let mut prod = complement.clone();
        for &i in order.iter().rev() {
            prod = ops[i] * &prod;
        }
        best = best.max(operator_norm(&prod, family.ctx()).value);
        if !next_permutation(&mut order) {
            break;
        }
    }
    Ok(best)
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    /// `max ‖P_τ P_σ − P_τ‖` over `τ ⊊ Δ`, codimension-one `σ ⊇ τ`.
    pub max_residual: f64,
    pub worst: Option<(Face, Face)>,
    pub threshold: f64,
    pub passed: bool,
}

pub fn consistency_check(family: &SimplexFamily) -> Result<ConsistencyReport> {
    let limits = family.all_limits()?;
    let mut max_residual: f64 = 0.0;
    let mut worst = None;
    for (tau, l) in &limits {
        if *tau == family.full() {
            continue;
        }
        let pt = l.projection.op();
        for sigma in family.cofaces(*tau) {
            let r = operator_norm(&(&(pt * family.codim1()[&sigma].op()) - pt), family.ctx()).value;
            if r > max_residual || worst.is_none() {
                max_residual = max_residual.max(r);
                worst = Some((*tau, sigma));
            }
        }
    }
    let threshold = family.tolerances().consistency;
    Ok(ConsistencyReport { max_residual, worst, threshold, passed: max_residual <= threshold })
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallAngleReport {
    pub epsilon: f64,
    pub norm_bound: f64,
    pub max_norm: f64,
    pub worst_norm_face: Face,
    /// `max ‖P_τ P_τ' (I − P_η)‖` over `τ, τ'` and `η ⊇ τ ∩ τ'`.
    pub max_product: f64,
    pub worst_product: Option<(Face, Face, Face)>,
    pub norm_passed: bool,
    pub product_passed: bool,
}

impl SmallAngleReport {
    pub fn passed(&self) -> bool {
        self.norm_passed && self.product_passed
    }
}

pub fn small_angle_verify(family: &SimplexFamily, epsilon: f64) -> Result<SmallAngleReport> {
    let limits = family.all_limits()?;
    let ctx = family.ctx();
    let id = Matrix::identity(family.dim());
    let norm_bound = 4.0 * (family.n() as f64 + 1.0) + 2.0;
    let mut max_norm: f64 = 0.0;
    let mut worst_norm_face = Face::EMPTY;
    for (face, l) in &limits {
        let v = operator_norm(l.projection.op(), ctx).value;
        if v > max_norm {
            max_norm = v;
            worst_norm_face = *face;
        }
    }
    let complements: Vec<(Face, Matrix)> = limits.iter().map(|(f, l)| (*f, &id - l.projection.op())).collect();
    let mut max_product: f64 = 0.0;
    let mut worst_product = None;
    for (t1, l1) in &limits {
        for (t2, l2) in &limits {
            let prod = l1.projection.op() * l2.projection.op();
            let meet = t1.intersection(*t2);
            for (eta, comp) in complements.iter().filter(|(e, _)| meet.is_subset(*e)) {
                let v = operator_norm(&(&prod * comp), ctx).value;
                if v > max_product || worst_product.is_none() {
                    max_product = max_product.max(v);
                    worst_product = Some((*t1, *t2, *eta));
                }
            }
        }
    }
    Ok(SmallAngleReport {
        epsilon,
        norm_bound,
        max_norm,
        worst_norm_face,
        max_product,
        worst_product,
        norm_passed: max_norm <= norm_bound,
        product_passed: max_product <= epsilon,
    })
}

/// `max ‖P_τ P_τ' − P_τ' P_τ‖` over all pairs of faces.
pub fn almost_commutativity(family: &SimplexFamily) -> Result<f64> {
    let limits = family.all_limits()?;
    let ops: Vec<&Matrix> = limits.values().map(|l| l.projection.op()).collect();
    let mut best: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            let c = &(*a * *b) - &(*b * *a);
            best = best.max(operator_norm(&c, family.ctx()).value);
        }
    }
    Ok(best)
}

/// `max{‖P_τ P_τ' (I − P_{τ∩τ'})‖, ‖P_τ' P_τ (I − P_{τ∩τ'})‖}`; no
/// absorption identities are assumed.
pub fn angle_no_consistency(family: &SimplexFamily, tau: Face, tau2: Face) -> Result<f64> {
    let a = family.p_tau(tau)?;
    let b = family.p_tau(tau2)?;
    let meet = family.p_tau(tau.intersection(tau2))?;
    let comp = &Matrix::identity(family.dim()) - meet.op();
    let x = &(a.op() * b.op()) * &comp;
    let y = &(b.op() * a.op()) * &comp;
    let ctx = family.ctx();
    Ok(operator_norm(&x, ctx).value.max(operator_norm(&y, ctx).value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_enumerated_once() {
        let mut v = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(v, vec![3, 2, 1, 0]);
    }
}
