use std::fs;
use std::path::Path;

use projangles::groups::{build_simplex_family, FiniteGroup, GroupRep, SubgroupFamily};
use projangles::linalg::{spectral_norm, NormContext};
use projangles::simplex::{consistency_check, decompose_oracle, decompose_tree, multi_angle, Face, SimplexFamily};
use projangles::spectra::{
    b_delta_r, projective_plane_graph, symplectic_quadrangle_graph, BipartiteGraph, SUPPORTED_ORDERS,
};

fn data(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)).unwrap()
}

#[test]
fn plane_kappa_matches_closed_form() {
    for q in SUPPORTED_ORDERS {
        let g = projective_plane_graph(q).unwrap();
        let qf = q as f64;
        let expected = 1.0 - qf.sqrt() / (qf + 1.0);
        assert!((g.kappa().unwrap() - expected).abs() < 1e-9, "q = {q}");
    }
}

#[test]
fn quadrangle_kappa_matches_closed_form() {
    for q in [2usize, 3] {
        let g = symplectic_quadrangle_graph(q).unwrap();
        let qf = q as f64;
        let expected = 1.0 - (2.0 * qf).sqrt() / (qf + 1.0);
        assert!((g.kappa().unwrap() - expected).abs() < 1e-9, "q = {q}");
    }
}

#[test]
fn heawood_file_round_trip() {
    let g = BipartiteGraph::parse(&data("heawood.txt")).unwrap();
    assert_eq!(g.part_sizes(), (7, 7));
    assert_eq!(g.girth(), Some(6));
    let again = BipartiteGraph::parse(&g.to_text()).unwrap();
    assert_eq!(again.edges(), g.edges());
    let report = b_delta_r(&g, 5.0).unwrap();
    let exact = 2f64.sqrt() / 3.0 * 7f64.powf(0.2);
    assert!((report.b_value - exact).abs() < 1e-9);
}

#[test]
fn family_file_to_decomposition() {
    let f = SimplexFamily::parse(&data("commuting8.fam")).unwrap();
    let again = SimplexFamily::parse(&f.to_text()).unwrap();
    assert_eq!(again.n(), f.n());
    assert!(consistency_check(&f).unwrap().passed);
    let tree = decompose_tree(&f, f.full(), 1e-10).unwrap();
    let oracle = decompose_oracle(&f, f.full()).unwrap();
    assert_eq!(tree.rank_sum, 8);
    assert_eq!(oracle.rank_sum, 8);
    for (tau, r) in &oracle.r_ops {
        assert!(spectral_norm(&(&tree.r_ops[tau] - r)) < 1e-9, "{tau}");
    }
}

#[test]
fn lines_at_sixty_degrees() {
    let f = SimplexFamily::parse(&data("lines60.fam")).unwrap();
    let codim1: Vec<Face> = f.codim1().keys().copied().collect();
    assert!((multi_angle(&f, &codim1).unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(f.p_tau(Face::EMPTY).unwrap().rank(), 0);
}

#[test]
fn group_files_build_consistent_family() {
    let g = FiniteGroup::parse(&data("s3.group")).unwrap();
    assert_eq!(g.order(), 6);
    let fam = SubgroupFamily::parse(&data("s3.subgroups"), &g).unwrap();
    let again = SubgroupFamily::parse(&fam.to_text(), &g).unwrap();
    assert_eq!(again.codim1(), fam.codim1());
    let rep = GroupRep::regular(&g, NormContext::HILBERT);
    let sf = build_simplex_family(&rep, &fam).unwrap();
    assert!(consistency_check(&sf).unwrap().max_residual <= 1e-10);
    assert_eq!(sf.p_tau(Face::EMPTY).unwrap().rank(), 1);
    let table = FiniteGroup::parse(&g.to_text()).unwrap();
    assert_eq!(table.order(), 6);
}
