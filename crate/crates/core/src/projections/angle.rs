use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::linalg::{intersect, operator_norm, NormEstimate, NormKind};
use crate::projections::projection::{residual_norm, Projection};

/// Angle between two projections relative to a projection onto the
/// intersection of their images:
/// `max{‖P₁(P₂ − P₁₂)‖, ‖P₂(P₁ − P₁₂)‖}`.
pub fn pair_angle(p1: &Projection, p2: &Projection, p12: &Projection) -> Result<f64> {
    pair_angle_estimate(p1, p2, p12).map(|e| e.value)
}

/// [`pair_angle`] with the reliability of the underlying ℓp norms.
pub fn pair_angle_estimate(p1: &Projection, p2: &Projection, p12: &Projection) -> Result<NormEstimate> {
    check_intersection_projection(p1, p2, p12, &Tolerances::default())?;
    let ctx = p1.ctx();
    let a = p1.op() * &(p2.op() - p12.op());
    let b = p2.op() * &(p1.op() - p12.op());
    Ok(max_estimate(operator_norm(&a, ctx), operator_norm(&b, ctx)))
}

/// Verifies `P₁₂P₁ = P₁₂` (absorption, i.e. `Ker P₁ ⊆ Ker P₁₂` on the left)
/// and `Im P₁₂ = Im P₁ ∩ Im P₂`.
pub(crate) fn check_intersection_projection(
    p1: &Projection,
    p2: &Projection,
    p12: &Projection,
    tol: &Tolerances,
) -> Result<()> {
    let n = p1.dim();
    if p2.dim() != n || p12.dim() != n {
        return Err(Error::domain("projections act on spaces of different dimension"));
    }
    let ctx = p1.ctx();
    let absorb = residual_norm(&(&(p12.op() * p1.op()) - p12.op()), ctx);
    if absorb > tol.projection * (1.0 + p12.op().frobenius()) {
        return Err(Error::ConsistencyPrecondition { identity: "P12 P1 = P12".into(), residual: absorb });
    }
    let image_in_1 = residual_norm(&(&(p1.op() * p12.op()) - p12.op()), ctx);
    let image_in_2 = residual_norm(&(&(p2.op() * p12.op()) - p12.op()), ctx);
    let common = intersect(&[p1.image_basis().clone(), p2.image_basis().clone()], tol.rank);
    let rank = p12.rank();
    let worst = image_in_1.max(image_in_2);
    if worst > tol.projection * (1.0 + p12.op().frobenius()) || rank != common.len() {
        return Err(Error::ConsistencyPrecondition {
            identity: format!("Im P12 = Im P1 ∩ Im P2 (rank {rank}, intersection {})", common.len()),
            residual: worst,
        });
    }
    Ok(())
}

/// Estimate for `max(a, b)` given estimates of `a` and `b`.
pub fn max_estimate(a: NormEstimate, b: NormEstimate) -> NormEstimate {
    match (a.kind, b.kind) {
        (NormKind::Exact, NormKind::Exact) => NormEstimate::exact(a.value.max(b.value)),
        _ => {
            let lo = a.lower().max(b.lower());
            match (a.upper(), b.upper()) {
                (Some(x), Some(y)) => NormEstimate::bracket(lo, x.max(y)),
                _ => NormEstimate::lower_bound(lo),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Basis, Matrix, NormContext};

    fn line(theta: f64) -> Projection {
        let (c, s) = (theta.cos(), theta.sin());
        Projection::from_matrix(Matrix::from_rows(&[vec![c * c, c * s], vec![c * s, s * s]]).unwrap(), NormContext::HILBERT)
            .unwrap()
    }

    fn zero(n: usize) -> Projection {
        Projection::from_matrix(Matrix::zeros(n, n), NormContext::HILBERT).unwrap()
    }

    #[test]
    fn lines_at_sixty_degrees() {
        let a = pair_angle(&line(0.0), &line(std::f64::consts::FRAC_PI_3), &zero(2)).unwrap();
        assert!((a - 0.5).abs() < 1e-12, "{a}");
    }

    #[test]
    fn orthogonal_lines_have_zero_angle() {
        let a = pair_angle(&line(0.0), &line(std::f64::consts::FRAC_PI_2), &zero(2)).unwrap();
        assert!(a.abs() < 1e-15);
    }

    // Friedrichs cosine of two planes in R^3 sharing the z axis.
    #[test]
    fn agrees_with_friedrichs_cosine() {
        let theta: f64 = 0.7;
        let plane = |t: f64| {
            let b = Basis::new(3, vec![vec![t.cos(), t.sin(), 0.0], vec![0.0, 0.0, 1.0]]);
            let m = b.to_matrix().unwrap();
            Projection::from_matrix(&m * &m.transpose(), NormContext::HILBERT).unwrap()
        };
        let p12 = Projection::from_matrix(Matrix::diag(&[0.0, 0.0, 1.0]), NormContext::HILBERT).unwrap();
        let a = pair_angle(&plane(0.0), &plane(theta), &p12).unwrap();
        assert!((a - theta.cos()).abs() < 1e-12);
    }

    #[test]
    fn wrong_intersection_is_rejected() {
        let err = pair_angle(&line(0.0), &line(1.0), &line(0.0)).unwrap_err();
        assert!(matches!(err, Error::ConsistencyPrecondition { .. }));
    }

    #[test]
    fn max_of_estimates() {
        let e = max_estimate(NormEstimate::exact(1.0), NormEstimate::bracket(0.5, 2.0));
        assert_eq!(e.kind, NormKind::Bracketed);
        assert_eq!(e.lower(), 1.0);
        assert_eq!(e.upper(), Some(2.0));
        let e = max_estimate(NormEstimate::lower_bound(3.0), NormEstimate::exact(1.0));
        assert_eq!(e.upper(), None);
    }
}
