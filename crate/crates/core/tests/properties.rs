use proptest::prelude::*;

use projangles::groups::symmetric_group;
use projangles::linalg::{lp_norm, operator_norm, svd, sym_eigen, Basis, Matrix, NormContext, NormKind};
use projangles::projections::{averaged_iteration, Projection};
use projangles::simplex::Face;
use projangles::spectra::{b_value, even_cycle};

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, rows * cols).prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

fn square(max: usize) -> impl Strategy<Value = Matrix> {
    (1..=max).prop_flat_map(|n| matrix(n, n))
}

fn unit_diag(bits: &[bool]) -> Matrix {
    Matrix::diag(&bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect::<Vec<_>>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(a in (1usize..=6, 1usize..=6).prop_flat_map(|(m, n)| matrix(m, n))) {
        let d = svd(&a);
        let s = &d.singular_values;
        prop_assert!(s.windows(2).all(|w| w[0] >= w[1]) && s.iter().all(|&v| v >= 0.0));
        let back = &(&d.u * &Matrix::diag(s)) * &d.v.transpose();
        prop_assert!((&back - &a).max_abs() <= 1e-10 * (1.0 + a.max_abs()));
    }

    #[test]
    fn eigenpairs_satisfy_definition(a in square(6)) {
        let sym = (&a + &a.transpose()).scale(0.5);
        let e = sym_eigen(&sym).unwrap();
        for (j, &lambda) in e.values.iter().enumerate() {
            let v = e.vectors.column(j);
            let av = sym.mul_vec(&v);
            let err = av.iter().zip(&v).map(|(x, y)| (x - lambda * y).abs()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-9 * (1.0 + sym.max_abs()));
        }
    }

    #[test]
    fn matrix_text_round_trip(a in square(5)) {
        let b = Matrix::parse(&a.to_text()).unwrap();
        prop_assert_eq!(a, b);
    }

    // Every reported bound must bracket the ratio at any test vector.
    #[test]
    fn norm_estimates_are_sound(
        a in square(4),
        p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, 7.0, f64::INFINITY]),
        x in prop::collection::vec(-1.0f64..1.0, 4),
    ) {
        let ctx = NormContext::new(p).unwrap();
        let est = operator_norm(&a, ctx);
        let x = &x[..a.cols()];
        let nx = lp_norm(x, p);
        prop_assume!(nx > 1e-6);
        let ratio = lp_norm(&a.mul_vec(x), p) / nx;
        prop_assert!(est.lower() <= est.value + 1e-12);
        if let Some(u) = est.upper() {
            prop_assert!(ratio <= u * (1.0 + 1e-9) + 1e-12, "ratio {} above {:?}", ratio, est);
        }
        if [1.0, 2.0, f64::INFINITY].contains(&p) {
            prop_assert_eq!(est.kind, NormKind::Exact);
        }
    }

    #[test]
    fn oblique_projection_is_idempotent(a in matrix(5, 5), split in 1usize..5) {
        let d = svd(&a);
        prop_assume!(d.condition() < 1e4);
        let cols = a.columns();
        let image = Basis::new(5, cols[..split].to_vec());
        let kernel = Basis::new(5, cols[split..].to_vec());
        let p = Projection::from_bases(&image, &kernel, NormContext::HILBERT).unwrap();
        prop_assert!(p.idem_residual() <= 1e-8);
        for v in image.vectors() {
            let pv = p.op().mul_vec(v);
            prop_assert!(pv.iter().zip(v).all(|(x, y)| (x - y).abs() <= 1e-7));
        }
        for v in kernel.vectors() {
            prop_assert!(p.op().mul_vec(v).iter().all(|x| x.abs() <= 1e-7));
        }
    }

    // Diagonal 0/1 projections commute; the limit keeps exactly the
    // coordinates kept by every projection.
    #[test]
    fn averaged_certificate_sound_on_commuting(
        diags in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 2..=4),
    ) {
        let ps: Vec<Projection> =
            diags.iter().map(|d| Projection::from_matrix(unit_diag(d), NormContext::HILBERT).unwrap()).collect();
        let out = averaged_iteration(&ps, 1e-12, 10_000).unwrap();
        let kept: Vec<bool> = (0..6).map(|k| diags.iter().all(|d| d[k])).collect();
        prop_assert!((out.limit.op() - &unit_diag(&kept)).max_abs() <= 1e-10);
        prop_assert_eq!(out.intersection_dim, kept.iter().filter(|&&b| b).count());
        let cert = &out.certificate;
        if cert.in_regime {
            prop_assert_eq!(cert.bound_held, Some(true));
            let (r, c) = (cert.rate.unwrap(), cert.constant.unwrap());
            for (i, g) in out.limit_gaps.iter().enumerate() {
                prop_assert!(*g <= c * r.powi(i as i32) + 1e-9);
            }
        }
    }

    #[test]
    fn face_lattice(bits in 0u32..(1 << 8)) {
        let f = Face::from_bits(bits);
        let subs = f.subfaces();
        prop_assert_eq!(subs.len(), 1usize << f.len());
        prop_assert!(subs.iter().all(|s| s.is_subset(f)));
        prop_assert_eq!(f.proper_subfaces().len(), subs.len() - 1);
        for v in f.vertices() {
            prop_assert_eq!(f.without(v).union(Face::from_vertices(&[v])), f);
        }
    }

    #[test]
    fn cycle_kappa_closed_form(k in 2usize..=12, r in 1.0f64..10.0) {
        let g = even_cycle(k);
        let kappa = g.kappa().unwrap();
        let expected = 1.0 - (std::f64::consts::PI / k as f64).cos();
        prop_assert!((kappa - expected).abs() <= 1e-10);
        prop_assert!(b_value(kappa, k, r) >= 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn group_axioms(degree in 1usize..=4, a in 0usize..24, b in 0usize..24, c in 0usize..24) {
        let g = symmetric_group(degree).unwrap();
        let n = g.order();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(n, (1..=degree).product::<usize>());
        prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
        prop_assert_eq!(g.mul(a, g.inv(a)), g.mul(g.inv(b), b));
        let gen = g.generate(&[a, b]);
        prop_assert_eq!(n % gen.order(), 0);
    }
}
