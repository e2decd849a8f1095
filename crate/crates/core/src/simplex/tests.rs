use std::collections::BTreeMap;

use super::synth::{commuting_family, near_orthogonal_family, perturbed_family};
use super::*;
use crate::error::Error;
use crate::linalg::{operator_norm, spectral_norm, Matrix, NormContext};
use crate::projections::pair_angle;

/// `Σ_{τ' ⊆ τ} (−1)^{|τ ∖ τ'|} P_τ'` for a commuting family.
fn inclusion_exclusion(f: &SimplexFamily, tau: Face) -> Matrix {
    let mut acc = Matrix::zeros(f.dim(), f.dim());
    for sub in tau.subfaces() {
        let sign = if (tau.len() - sub.len()).is_multiple_of(2) { 1.0 } else { -1.0 };
        acc = &acc + &f.p_tau(sub).unwrap().op().scale(sign);
    }
    acc
}

#[test]
fn commuting_tree_matches_inclusion_exclusion() {
    for seed in 0..5 {
        let f = commuting_family(2, 8, seed).unwrap();
        let eta = f.full();
        let tree = decompose_tree(&f, eta, 1e-10).unwrap();
        assert!(tree.direct);
        assert_eq!(tree.rank_sum, 8);
        for (tau, r) in &tree.r_ops {
            let expected = inclusion_exclusion(&f, *tau);
            assert!((r - &expected).max_abs() < 1e-9, "{tau}");
        }
        let oracle = decompose_oracle(&f, eta).unwrap();
        for (tau, b) in &oracle.summand_bases {
            assert_eq!(b.len(), tree.summand_bases[tau].len(), "{tau}");
        }
    }
}

#[test]
fn single_vertex_is_depth_one() {
    let f = near_orthogonal_family(2, 3, 2, 1e-3, 7).unwrap();
    let eta = Face::from_vertices(&[1]);
    let d = decompose_tree(&f, eta, 1e-10).unwrap();
    assert_eq!(d.truncation_depth, Some(1));
    let expected = f.p_tau(eta).unwrap().op() - f.p_tau(Face::EMPTY).unwrap().op();
    assert!((&d.r_ops[&eta] - &expected).max_abs() == 0.0);
    let oracle = decompose_oracle(&f, Face::EMPTY).unwrap();
    assert_eq!(oracle.summand_bases[&Face::EMPTY].len(), f.p_tau(Face::EMPTY).unwrap().rank());
}

#[test]
fn tree_agrees_with_oracle_on_synthesized_families() {
    for seed in 0..6 {
        let f = near_orthogonal_family(2, 4, 3, 1e-3, seed).unwrap();
        let eta = f.full();
        let tree = decompose_tree(&f, eta, 1e-10).unwrap();
        let oracle = decompose_oracle(&f, eta).unwrap();
        assert!(tree.direct && oracle.direct, "seed {seed}");
        assert_eq!(oracle.rank_sum, oracle.rank_eta);
        for (tau, r) in &oracle.r_ops {
            let gap = spectral_norm(&(&tree.r_ops[tau] - r));
            assert!(gap <= 1e-6, "seed {seed} face {tau}: {gap}");
        }
        for lvl in &tree.levels {
            assert!(lvl.idempotency_residual < 1e-9 && lvl.annihilation_residual < 1e-9);
        }
    }
}

// v ∈ X_η lies in X^η iff every R_τ with τ ⊊ η kills it.
#[test]
fn membership_on_basis_vectors() {
    let f = near_orthogonal_family(2, 4, 2, 1e-3, 11).unwrap();
    let tree = decompose_tree(&f, f.full(), 1e-10).unwrap();
    let oracle = decompose_oracle(&f, f.full()).unwrap();
    for eta in f.full().subfaces() {
        for v in oracle.summand_bases[&eta].vectors() {
            for tau in eta.proper_subfaces() {
                let rv = tree.r_ops[&tau].mul_vec(v);
                assert!(rv.iter().all(|x| x.abs() < 1e-6), "{eta} {tau}");
            }
        }
        // a vector of X_η outside X^η is caught by some R_τ
        for tau in eta.proper_subfaces() {
            for v in oracle.summand_bases[&tau].vectors() {
                let hit = tree.r_ops[&tau].mul_vec(v);
                assert!(hit.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-6));
            }
        }
    }
}

#[test]
fn step_two_bound_holds() {
    let f = near_orthogonal_family(2, 4, 2, 1e-3, 3).unwrap();
    let tree = decompose_tree(&f, f.full(), 1e-10).unwrap();
    for lvl in &tree.levels {
        let labels = lvl.face.proper_subfaces();
        for a in &labels {
            for b in &labels {
                if a != b {
                    let v = spectral_norm(&(&tree.r_ops[a] * &tree.r_ops[b]));
                    assert!(v <= lvl.c * lvl.c * lvl.epsilon + 1e-8);
                }
            }
        }
    }
}

#[test]
fn multi_angle_cases() {
    let f = commuting_family(3, 8, 1).unwrap();
    let faces = codim1_faces(3);
    assert!(multi_angle(&f, &faces).unwrap() < 1e-12);

    let g = near_orthogonal_family(2, 3, 1, 0.2, 5).unwrap();
    let s: Vec<Face> = codim1_faces(2)[..2].to_vec();
    let tau = s[0].intersection(s[1]);
    let comp = &Matrix::identity(g.dim()) - g.p_tau(tau).unwrap().op();
    let (a, b) = (g.codim1()[&s[0]].op(), g.codim1()[&s[1]].op());
    let expected = spectral_norm(&(&(a * b) * &comp)).max(spectral_norm(&(&(b * a) * &comp)));
    assert!((multi_angle(&g, &s).unwrap() - expected).abs() < 1e-14);

    let big = commuting_family(7, 4, 2).unwrap();
    let err = multi_angle(&big, &codim1_faces(7)).unwrap_err();
    assert!(matches!(err, Error::PermutationCap { requested: 8, cap: 7 }));
}

#[test]
fn consistency_reports() {
    let f = commuting_family(2, 8, 4).unwrap();
    let r = consistency_check(&f).unwrap();
    assert!(r.passed && r.max_residual < 1e-10);
    let g = near_orthogonal_family(2, 3, 2, 0.05, 4).unwrap();
    let p = perturbed_family(&g, 1e-3, 9).unwrap();
    let r = consistency_check(&p).unwrap();
    assert!(!r.passed && r.max_residual >= 1e-4, "{}", r.max_residual);
}

#[test]
fn small_angle_reports() {
    let f = commuting_family(2, 8, 5).unwrap();
    let r = small_angle_verify(&f, 1e-9).unwrap();
    assert!(r.passed() && r.max_product < 1e-10, "{r:?}");
    let g = near_orthogonal_family(2, 4, 2, 1e-3, 6).unwrap();
    let r = small_angle_verify(&g, 0.1).unwrap();
    assert!(r.passed(), "{r:?}");
    assert!(r.max_norm <= 4.0 * 3.0 + 2.0 + 1e-6);
}

#[test]
fn almost_commutativity_grows_with_noise() {
    let f = commuting_family(2, 6, 8).unwrap();
    assert!(almost_commutativity(&f).unwrap() < 1e-10);
    let values: Vec<f64> = [1e-4, 1e-3, 1e-2]
        .iter()
        .map(|&e| almost_commutativity(&perturbed_family(&f, e, 21).unwrap()).unwrap())
        .collect();
    assert!(values[0] > 0.0 && values[0] < values[1] && values[1] < values[2], "{values:?}");
}

#[test]
fn angle_without_consistency() {
    let g = near_orthogonal_family(2, 4, 2, 0.1, 2).unwrap();
    let faces = codim1_faces(2);
    for &t in &faces {
        assert!(angle_no_consistency(&g, t, t).unwrap() < 1e-12);
        assert!(angle_no_consistency(&g, g.full(), t).unwrap() < 1e-12);
    }
    let mut largest: f64 = 0.0;
    for (i, &s1) in faces.iter().enumerate() {
        for &s2 in &faces[i + 1..] {
            let p12 = g.p_tau(s1.intersection(s2)).unwrap();
            let via_pair = pair_angle(&g.codim1()[&s1], &g.codim1()[&s2], &p12).unwrap();
            let direct = angle_no_consistency(&g, s1, s2).unwrap();
            assert!((via_pair - direct).abs() < 1e-8);
            largest = largest.max(direct);
        }
    }
    assert!((largest - 0.1).abs() < 1e-8, "{largest}");
}

#[test]
fn concurrent_limits_agree() {
    let f = near_orthogonal_family(3, 4, 4, 1e-3, 13).unwrap();
    let first: BTreeMap<Face, Matrix> =
        f.all_limits().unwrap().into_iter().map(|(k, l)| (k, l.projection.op().clone())).collect();
    let fresh = f.clone().with_ctx(NormContext::HILBERT);
    let second = fresh.all_limits().unwrap();
    for (k, m) in first {
        assert!((&m - second[&k].projection.op()).max_abs() < 1e-10);
    }
}

#[test]
fn lp_context_changes_values_not_structure() {
    let g = near_orthogonal_family(2, 2, 1, 0.2, 1).unwrap();
    let h = g.with_ctx(NormContext::infinity());
    let p = h.p_tau(Face::EMPTY).unwrap();
    assert_eq!(p.ctx(), NormContext::infinity());
    assert!(operator_norm(p.op(), h.ctx()).value >= spectral_norm(p.op()) - 1e-12 || p.rank() == 0);
}
