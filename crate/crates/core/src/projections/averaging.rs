use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{intersect, operator_norm, Basis, Matrix, NormContext};
use crate::projections::angle::{check_intersection_projection, pair_angle_estimate};
use crate::projections::constants::theorem_constants;
use crate::projections::projection::{cheap_upper_norm, residual_norm, Projection};

/// Convergence certificate of an averaged iteration. β and γ are measured
/// from the inputs; `rate` and `constant` are present only in regime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "N")]
    pub n: usize,
    pub beta: f64,
    /// `None` when some pairwise limit could not be formed.
    pub gamma: Option<f64>,
    pub rate: Option<f64>,
    pub constant: Option<f64>,
    pub iterations: usize,
    pub final_residual: f64,
    pub in_regime: bool,
    /// Whether every recorded gap obeyed `C r^{i−1}` (plus slack).
    pub bound_held: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct AveragedOutcome {
    pub limit: Projection,
    pub certificate: Certificate,
    /// `‖T^{i+1} − T^i‖` upper bounds, one per step.
    pub residuals: Vec<f64>,
    /// `‖T^∞ − T^i‖` for `i = 1..=iterations`.
    pub limit_gaps: Vec<f64>,
    /// Dimension of `⋂ Im P_j` from the kernel-intersection oracle.
    pub intersection_dim: usize,
}

/// `(P₁ + … + P_N)/N`.
pub fn average(ops: &[&Matrix]) -> Matrix {
    let mut t = ops[0].clone();
    for op in &ops[1..] {
        t = &t + op;
    }
    t.scale(1.0 / ops.len() as f64)
}

/// Powers of `t` until `‖t^{i+1} − t^i‖ ≤ tol`. Returns the last power,
/// the residual history and the number of steps.
pub(crate) fn iterate_powers(t: &Matrix, ctx: NormContext, tol: f64, max_iter: usize) -> Result<(Matrix, Vec<f64>, usize)> {
    let mut current = t.clone();
    let mut residuals = Vec::new();
    for i in 1..=max_iter {
        let next = &current * t;
        let r = cheap_upper_norm(&(&next - &current), ctx);
        residuals.push(r);
        current = next;
        if r <= tol {
            return Ok((current, residuals, i));
        }
        if !r.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence { iterations: residuals.len(), residuals })
}

pub fn averaged_iteration(projections: &[Projection], tol: f64, max_iter: usize) -> Result<AveragedOutcome> {
    averaged_iteration_with(projections, tol, max_iter, &Tolerances::default())
}

pub fn averaged_iteration_with(
    projections: &[Projection],
    tol: f64,
    max_iter: usize,
    tolerances: &Tolerances,
) -> Result<AveragedOutcome> {
    let n = projections.len();
    if n < 2 {
        return Err(Error::domain(format!("averaging needs at least two projections, got {n}")));
    }
    let ctx = projections[0].ctx();
    let dim = projections[0].dim();
    if projections.iter().any(|p| p.dim() != dim || p.ctx() != ctx) {
        return Err(Error::domain("projections must share dimension and norm context"));
    }

    let ops: Vec<&Matrix> = projections.iter().map(Projection::op).collect();
    let t = average(&ops);
    let (limit_op, residuals, iterations) = iterate_powers(&t, ctx, tol, max_iter)?;
    let limit = Projection::from_matrix_with(limit_op, ctx, tolerances)?;

    let mut gaps = Vec::with_capacity(iterations);
    let mut power = t.clone();
    for _ in 0..iterations {
        gaps.push(operator_norm(&(limit.op() - &power), ctx).lower());
        power = &power * &t;
    }

    let beta = projections.iter().map(|p| operator_norm(p.op(), ctx).value).fold(1.0, f64::max);
    let (gamma, mut note) = match measure_gamma(projections, tol, max_iter, tolerances) {
        Ok(g) => (Some(g), None),
        Err(e) => (None, Some(format!("pairwise angle unavailable: {e}"))),
    };
    let constants = gamma.map(|g| theorem_constants(n, beta, g));
    let (rate, constant, bound_held) = match constants {
        Some(Ok(c)) => {
            let held = gaps
                .iter()
                .enumerate()
                .all(|(i, g)| *g <= c.constant * c.rate.powi(i as i32) + tolerances.certificate_slack);
            (Some(c.rate), Some(c.constant), Some(held))
        }
        Some(Err(e)) => {
            note.get_or_insert_with(|| e.to_string());
            (None, None, None)
        }
        None => (None, None, None),
    };
    let images: Vec<Basis> = projections.iter().map(|p| p.image_basis().clone()).collect();
    let intersection_dim = intersect(&images, tolerances.rank).len();

    let certificate = Certificate {
        n,
        beta,
        gamma,
        rate,
        constant,
        iterations,
        final_residual: residuals.last().copied().unwrap_or(0.0),
        in_regime: rate.is_some(),
        bound_held,
        note,
    };
    Ok(AveragedOutcome { limit, certificate, residuals, limit_gaps: gaps, intersection_dim })
}

/// Largest pairwise angle, each pair measured against the limit of its own
/// averaged iteration.
fn measure_gamma(projections: &[Projection], tol: f64, max_iter: usize, tolerances: &Tolerances) -> Result<f64> {
    let ctx = projections[0].ctx();
    let mut gamma: f64 = 0.0;
    for i in 0..projections.len() {
        for j in (i + 1)..projections.len() {
            let (p1, p2) = (&projections[i], &projections[j]);
            let t = average(&[p1.op(), p2.op()]);
            let (op, _, _) = iterate_powers(&t, ctx, tol, max_iter)?;
            let p12 = Projection::from_matrix_with(op, ctx, tolerances)?;
            check_intersection_projection(p2, p1, &p12, tolerances)?;
            gamma = gamma.max(pair_angle_estimate(p1, p2, &p12)?.value);
        }
    }
    Ok(gamma)
}

/// Result of comparing the averaged limit with a proposed projection onto
/// the intersection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CanonicalVerdict {
    Holds { distance: f64 },
    Fails { distance: f64 },
    NotApplicable { reason: String },
}

impl CanonicalVerdict {
    /// `Some(true/false)` when the check applied.
    pub fn holds(&self) -> Option<bool> {
        match self {
            CanonicalVerdict::Holds { .. } => Some(true),
            CanonicalVerdict::Fails { .. } => Some(false),
            CanonicalVerdict::NotApplicable { .. } => None,
        }
    }
}

/// Checks whether the averaged limit equals `candidate`, a projection onto
/// `⋂ Im P_j` absorbing every `P_j` from the right.
pub fn canonical_check(projections: &[Projection], candidate: &Projection) -> CanonicalVerdict {
    let tol = Tolerances::default();
    let na = |reason: String| CanonicalVerdict::NotApplicable { reason };
    if projections.is_empty() {
        return na("no projections".into());
    }
    let ctx = candidate.ctx();
    let scale = 1.0 + candidate.op().frobenius();
    for (j, p) in projections.iter().enumerate() {
        if p.dim() != candidate.dim() {
            return na(format!("projection {j} has dimension {}", p.dim()));
        }
        let absorb = residual_norm(&(&(candidate.op() * p.op()) - candidate.op()), ctx);
        let inside = residual_norm(&(&(p.op() * candidate.op()) - candidate.op()), ctx);
        if absorb > tol.projection * scale {
            return na(format!("candidate does not absorb projection {j} (residual {absorb:e})"));
        }
        if inside > tol.projection * scale {
            return na(format!("candidate image is not inside image of projection {j} (residual {inside:e})"));
        }
    }
    let images: Vec<Basis> = projections.iter().map(|p| p.image_basis().clone()).collect();
    let common = intersect(&images, tol.rank).len();
    if candidate.rank() != common {
        return na(format!("candidate rank {} differs from intersection dimension {common}", candidate.rank()));
    }
    let limit = if projections.len() == 1 {
        projections[0].op().clone()
    } else {
        let ops: Vec<&Matrix> = projections.iter().map(Projection::op).collect();
        match iterate_powers(&average(&ops), ctx, tol.iteration, tol.max_iterations) {
            Ok((op, _, _)) => op,
            Err(e) => return na(format!("averaged iteration did not converge: {e}")),
        }
    };
    let distance = residual_norm(&(&limit - candidate.op()), ctx);
    if distance <= tol.canonical {
        CanonicalVerdict::Holds { distance }
    } else {
        CanonicalVerdict::Fails { distance }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;

    fn orth(m: &Matrix) -> Projection {
        Projection::from_matrix(m * &m.transpose(), NormContext::HILBERT).unwrap()
    }

    fn line(theta: f64) -> Projection {
        orth(&Matrix::from_columns(2, &[vec![theta.cos(), theta.sin()]]))
    }

    fn diag(d: &[f64]) -> Projection {
        Projection::from_matrix(Matrix::diag(d), NormContext::HILBERT).unwrap()
    }

    #[test]
    fn equal_projections_stop_after_one_step() {
        let p = diag(&[1.0, 0.0, 1.0]);
        let out = averaged_iteration(&[p.clone(), p.clone(), p.clone()], 1e-12, 100).unwrap();
        assert_eq!(out.certificate.iterations, 1);
        assert!((out.limit.op() - p.op()).max_abs() < 1e-15);
        assert!(out.certificate.in_regime);
    }

    #[test]
    fn sixty_degree_lines() {
        let ps = [line(0.0), line(std::f64::consts::FRAC_PI_3)];
        let t = average(&[ps[0].op(), ps[1].op()]);
        let e = sym_eigen(&t).unwrap();
        assert!((e.values[0] - 0.25).abs() < 1e-12 && (e.values[1] - 0.75).abs() < 1e-12);
        let out = averaged_iteration(&ps, 1e-12, 1000).unwrap();
        assert!(out.limit.op().max_abs() < 1e-11);
        assert_eq!(out.limit.rank(), 0);
        assert_eq!(out.intersection_dim, 0);
        let c = &out.certificate;
        assert!((c.beta - 1.0).abs() < 1e-12);
        assert!((c.gamma.unwrap() - 0.5).abs() < 1e-9);
        assert!(!c.in_regime && c.rate.is_none());
        // gaps follow 0.75^i exactly
        for (i, g) in out.limit_gaps.iter().enumerate().take(20) {
            assert!((g - 0.75f64.powi(i as i32 + 1)).abs() < 1e-10);
        }
    }

    #[test]
    fn nearly_orthogonal_lines_are_certified() {
        let ps = [line(0.0), line(std::f64::consts::FRAC_PI_2 - 0.1)];
        let out = averaged_iteration(&ps, 1e-12, 1000).unwrap();
        let c = &out.certificate;
        assert!(c.in_regime, "{c:?}");
        assert_eq!(c.bound_held, Some(true));
    }

    #[test]
    fn non_convergence_carries_history() {
        let ps = [line(0.0), line(0.01)];
        match averaged_iteration(&ps, 1e-12, 5) {
            Err(Error::NonConvergence { iterations, residuals }) => {
                assert_eq!(iterations, 5);
                assert_eq!(residuals.len(), 5);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn canonical_check_cases() {
        let a = diag(&[1.0, 1.0, 0.0]);
        let b = diag(&[0.0, 1.0, 1.0]);
        assert_eq!(canonical_check(&[a.clone(), b.clone()], &diag(&[0.0, 1.0, 0.0])).holds(), Some(true));
        let id = diag(&[1.0, 1.0]);
        assert_eq!(canonical_check(&[id.clone(), id.clone()], &id).holds(), Some(true));
        let planes = [orth(&Matrix::from_columns(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]])), orth(
            &Matrix::from_columns(3, &[vec![0.6, 0.8, 0.0], vec![0.0, 0.0, 1.0]]),
        )];
        assert_eq!(canonical_check(&planes, &diag(&[0.0, 0.0, 1.0])).holds(), Some(true));
        // wrong candidate: not a projection onto the intersection
        assert_eq!(canonical_check(&[a, b], &diag(&[1.0, 0.0, 0.0])).holds(), None);
    }
}
