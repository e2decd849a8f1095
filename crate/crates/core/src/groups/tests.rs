use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::{Matrix, NormContext};
use crate::simplex::{consistency_check, decompose_oracle, multi_angle, Face};

fn hilbert() -> NormContext {
    NormContext::HILBERT
}

#[test]
fn s3_family_structure() {
    let m = s3_model().unwrap();
    let rep = GroupRep::regular(&m.group, hilbert());
    let fam = build_simplex_family(&rep, &m.family).unwrap();
    assert_eq!(fam.p_tau(Face::EMPTY).unwrap().rank(), 1);
    let faces: Vec<Face> = fam.codim1().keys().copied().collect();
    assert!((multi_angle(&fam, &faces).unwrap() - 0.5).abs() < 1e-9);
    let dec = decompose_oracle(&fam, fam.full()).unwrap();
    let dims: Vec<(Face, usize)> = dec.summand_bases.iter().map(|(f, b)| (*f, b.len())).collect();
    assert_eq!(
        dims,
        vec![(Face::EMPTY, 1), (Face::from_vertices(&[0]), 2), (Face::from_vertices(&[0, 1]), 1), (Face::from_vertices(&[1]), 2)]
    );
}

// The limit projection of a face is the average over its generated subgroup.
#[test]
fn face_limits_are_group_averages() {
    for m in [s3_model().unwrap(), s4_model().unwrap()] {
        let rep = GroupRep::regular(&m.group, hilbert());
        let fam = build_simplex_family(&rep, &m.family).unwrap();
        for tau in fam.full().subfaces() {
            let expected = averaging_operator(&rep, &m.family.subgroup_of(&m.group, tau)).unwrap();
            let got = fam.p_tau(tau).unwrap();
            assert!((got.op() - expected.op()).max_abs() < 1e-9, "{} {tau}", m.name);
        }
    }
}

#[test]
fn consistency_is_exact_on_models() {
    for name in MODEL_NAMES {
        let m = model(name).unwrap();
        let rep = GroupRep::regular(&m.group, hilbert());
        let fam = build_simplex_family(&rep, &m.family).unwrap();
        let report = consistency_check(&fam).unwrap();
        assert!(report.max_residual <= 1e-10, "{name}: {}", report.max_residual);
        for k in m.family.codim1().values() {
            assert!(absorption_residual(&rep, k).unwrap() <= 1e-10);
        }
    }
}

#[test]
fn all_subgroups_whole_gives_zero_angles() {
    let g = symmetric_group(3).unwrap();
    let w = g.whole().elements().to_vec();
    let fam = SubgroupFamily::new(&g, &[0], &[w.clone(), w]).unwrap();
    let rep = GroupRep::regular(&g, hilbert());
    let sf = build_simplex_family(&rep, &fam).unwrap();
    let faces: Vec<Face> = sf.codim1().keys().copied().collect();
    assert!(multi_angle(&sf, &faces).unwrap().abs() < 1e-12);
    for row in lp_angle_sweep(&rep, &fam, &[4.0, f64::INFINITY]).unwrap() {
        assert!(row.angle.value.abs() < 1e-12, "p={}", row.p);
    }
}

#[test]
fn coset_graphs() {
    let m = s3_model().unwrap();
    let (k1, k2, amb) = &m.links[0];
    let g = coset_link_graph(&m.group, k1, k2, amb).unwrap();
    assert_eq!(g.part_sizes(), (3, 3));
    assert_eq!(g.biregularity(), Some((2, 2)));
    assert_eq!(g.girth(), Some(6));
    let single = coset_link_graph(&m.group, amb, amb, amb).unwrap();
    assert_eq!((single.part_sizes(), single.edges().len()), ((1, 1), 1));
    let d = d4_model().unwrap();
    let (k1, k2, amb) = &d.links[0];
    let oct = coset_link_graph(&d.group, k1, k2, amb).unwrap();
    assert_eq!(oct.part_sizes(), (4, 4));
    assert_eq!(oct.girth(), Some(8));
    assert!(coset_link_graph(&m.group, amb, k1, k2).is_err());
}

#[test]
fn schatten_checks() {
    let m = s3_model().unwrap();
    let rep = GroupRep::regular(&m.group, hilbert());
    let (k1, k2, amb) = &m.links[0];
    let r = schatten_link_bound_check(&rep, k1, k2, amb, 2.0).unwrap();
    assert!((r.lhs - 0.5f64.sqrt()).abs() < 1e-12);
    assert!((r.rhs - 0.75f64.sqrt()).abs() < 1e-9);
    assert!(r.holds);
    assert!(schatten_link_bound_check(&rep, k1, k1, k1, 3.0).unwrap().lhs < 1e-12);

    // D4: singular values √2/2 twice, octagon 1 − κ = √2/2 with V_min = 4
    let d = d4_model().unwrap();
    let rep = GroupRep::regular(&d.group, hilbert());
    let (k1, k2, amb) = &d.links[0];
    for r in [2.0, 3.0] {
        let rep_r = schatten_link_bound_check(&rep, k1, k2, amb, r).unwrap();
        let s = 0.5f64.sqrt();
        assert!((rep_r.lhs - s * 2f64.powf(1.0 / r)).abs() < 1e-10);
        assert!((rep_r.rhs - s * 4f64.powf(1.0 / r)).abs() < 1e-9);
        assert!(rep_r.holds);
    }

    let s4 = s4_model().unwrap();
    let rep = GroupRep::regular(&s4.group, hilbert());
    assert_eq!(s4.links.len(), 6);
    for (k1, k2, amb) in &s4.links {
        assert!(schatten_link_bound_check(&rep, k1, k2, amb, 2.0).unwrap().holds);
    }
}

#[test]
fn pi_f_examples() {
    let m = s3_model().unwrap();
    let rep = GroupRep::regular(&m.group, hilbert());
    let (k1, _, _) = &m.links[0];
    let r = pi_f_bound_check(&rep, &rep.averaging_coefficients(k1)).unwrap();
    assert!((r.lhs.value - 1.0).abs() < 1e-12);
    assert_eq!(r.holds, Some(true));
    let mut delta = vec![0.0; 6];
    delta[0] = 1.0;
    assert!((pi_f_bound_check(&rep, &delta).unwrap().lhs.value - 1.0).abs() < 1e-12);

    let mut d = vec![1.0; 6];
    d[0] = 2.0;
    let conj = rep.conjugated(&Matrix::diag(&d)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let f: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        assert_eq!(pi_f_bound_check(&conj, &f).unwrap().holds, Some(true));
    }
}

#[test]
fn lp_sweep_anchor() {
    let m = s3_model().unwrap();
    let rep = GroupRep::regular(&m.group, hilbert());
    let rows = lp_angle_sweep(&rep, &m.family, &[4.0, f64::INFINITY]).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].p, 2.0);
    assert!((rows[0].angle.value - 0.5).abs() < 1e-9);
    assert!(rows.iter().all(|r| r.angle.value.is_finite()));
}

#[test]
fn non_subgroup_rejected() {
    let g = symmetric_group(3).unwrap();
    let r = g.element_from_cycles("(1 2 3)").unwrap();
    match g.subgroup(&[0, r]) {
        Err(crate::error::Error::Subgroup(_)) => {}
        other => panic!("{other:?}"),
    }
}
