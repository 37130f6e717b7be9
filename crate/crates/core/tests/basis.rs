use biharm_core::basis::*;
use biharm_core::engine::{self, PointGeometry};
use biharm_core::immersion::*;
use biharm_core::sampling::halton_points;
use biharm_core::GeomError;

fn corollary_basis(u: [f64; 3]) -> (PointGeometry, AdaptedBasis) {
    let p = PointGeometry::new(&corollary_flat(), u).unwrap();
    let ab = adapted_basis(&p.fundamental_forms()).unwrap();
    (p, ab)
}

#[test]
fn corollary_flat_constants() {
    let s5 = 5f64.sqrt();
    let s10 = 10f64.sqrt();
    for u in halton_points(corollary_flat().domain(), 10, 2) {
        let (_, ab) = corollary_basis(u);
        assert!((ab.lambda1 - 4.0 / s5).abs() < 1e-10);
        assert!((ab.lambda2 + 1.0 / s5).abs() < 1e-10);
        assert!((ab.lambda3 + 1.0 / s5).abs() < 1e-10);
        assert!(ab.degenerate_plane);
        assert!((ab.a - 3.0 * 3f64.sqrt() / s10).abs() < 1e-8);
        assert!(ab.b.abs() < 1e-8);
        assert!((ab.c + 3f64.sqrt() / s10).abs() < 1e-8);
        assert!((ab.d - 2f64.sqrt()).abs() < 1e-8);
        assert!(ab.pattern_residual < 1e-7);
        assert!((ab.multiplier - 1.5 * ab.lambda1).abs() < 1e-8);
    }
}

#[test]
fn lagrange_determinant_formulas() {
    let (p, ab) = corollary_basis([0.5, 0.5, 0.5]);
    let ff = p.fundamental_forms();
    let cp = maximize_cubic(&ff).unwrap();
    let det = lagrange_determinant(&ff.hphi, &cp);
    // 36(2λ₂-λ₁)(2λ₃-λ₁) = 36·36/5
    assert!((det - 259.2).abs() < 1e-8);
    assert!((ab.determinant_formula() - det).abs() / det < 1e-10);
    assert!((ab.determinant_printed() - 180.0).abs() < 1e-8);
}

#[test]
fn cubic_form_domain_and_parity() {
    let (p, ab) = corollary_basis([0.2, 0.9, -0.4]);
    let ff = p.fundamental_forms();
    assert!(matches!(
        cubic_form(&ff, &[1.0, 1.0, 0.0]),
        Err(GeomError::Domain(_))
    ));
    let x1 = &ab.axes[0];
    assert!((cubic_form(&ff, x1).unwrap() - ab.lambda1).abs() < 1e-12);
    let neg: Vec<f64> = x1.iter().map(|v| -v).collect();
    assert!((cubic_form(&ff, &neg).unwrap() + ab.lambda1).abs() < 1e-12);
}

#[test]
fn axes_are_orthonormal_and_x1_is_an_eigenvector() {
    let (p, ab) = corollary_basis([1.0, 2.0, 3.0]);
    for i in 0..3 {
        for j in 0..3 {
            let d: f64 = ab.axes[i].iter().zip(&ab.axes[j]).map(|(a, b)| a * b).sum();
            assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
        }
    }
    let a1 = p.fundamental_forms().hphi.contract1(&ab.axes[0]);
    let v = a1 * nalgebra::DVector::from_vec(ab.axes[0].clone());
    for (vi, xi) in v.iter().zip(&ab.axes[0]) {
        assert!((vi - ab.lambda1 * xi).abs() < 1e-8);
    }
}

#[test]
fn inequalities_hold_on_every_non_minimal_example() {
    for id in ImmersionId::ALL {
        let Some(imm) = id.build_fixed() else {
            continue;
        };
        if id == ImmersionId::GreatSphere {
            continue;
        }
        let p = PointGeometry::new(&imm, [0.3, 1.2, 0.4]).unwrap();
        let ab = adapted_basis(&p.fundamental_forms()).unwrap();
        for m in ab.inequality_margins() {
            assert!(m > -1e-8, "{id}: {:?}", ab.inequality_margins());
        }
    }
}

#[test]
fn totally_geodesic_point_is_degenerate() {
    let p = PointGeometry::new(&great_legendrian_sphere(), [1.0, 1.0, 0.0]).unwrap();
    assert!(matches!(
        maximize_cubic(&p.fundamental_forms()),
        Err(GeomError::Degenerate { .. })
    ));
}

#[test]
fn corollary_nonflat_realizes_case_i() {
    let p = PointGeometry::new(&corollary_nonflat(), [0.3, 1.2, 0.4]).unwrap();
    let ab = adapted_basis(&p.fundamental_forms()).unwrap();
    assert_eq!(ab.case(1e-6), MultiplicityCase::I);
    assert!(ab.pattern_residual < 1e-7);
}

#[test]
fn flips_preserve_the_invariants() {
    let (_, ab) = corollary_basis([0.7, 0.1, 1.9]);
    for (s2, s3) in [(-1.0, 1.0), (1.0, -1.0), (-1.0, -1.0)] {
        let axes = vec![
            ab.axes[0].clone(),
            ab.axes[1].iter().map(|v| s2 * v).collect(),
            ab.axes[2].iter().map(|v| s3 * v).collect(),
        ];
        let t = ab
            .form
            .in_basis(&[vec![1.0, 0.0, 0.0], vec![0.0, s2, 0.0], vec![0.0, 0.0, s3]]);
        let flipped = AdaptedBasis {
            axes,
            lambda1: t.get(0, 0, 0),
            lambda2: t.get(0, 1, 1),
            lambda3: t.get(0, 2, 2),
            a: t.get(1, 1, 1),
            b: t.get(1, 1, 2),
            c: t.get(1, 2, 2),
            d: t.get(2, 2, 2),
            form: t,
            ..ab.clone()
        };
        for (x, y) in ab.invariants().iter().zip(flipped.invariants()) {
            assert!((x - y).abs() < 1e-8);
        }
        assert!((flipped.a - s2 * ab.a).abs() < 1e-12);
        assert!((flipped.d - s3 * ab.d).abs() < 1e-12);
    }
}

#[test]
fn identities_on_c_parallel_examples() {
    for imm in [
        corollary_flat(),
        corollary_nonflat(),
        build_fixed_flat(3).unwrap(),
    ] {
        let pts = halton_points(imm.domain(), 10, 4);
        let r = identity_checks(&imm, &pts).unwrap();
        for check in [
            "c-parallel",
            "corrected-identity",
            "K1",
            "K2",
            "semi-parallel",
        ] {
            assert!(r.get(check).unwrap().pass, "{}: {check}", imm.label());
        }
    }
}

#[test]
fn identity_report_stops_without_c_parallel() {
    let imm = corollary_flat();
    let pts = halton_points(imm.domain(), 4, 0);
    let r = identity_checks_with(&imm, &pts, 0.0).unwrap();
    assert!(!r.get("c-parallel").unwrap().pass);
    assert_eq!(r.records.len(), 1);
}

#[test]
fn gauss_riemann_matches_the_intrinsic_tensor() {
    let imm = corollary_nonflat();
    let p = PointGeometry::new(&imm, [0.9, 1.1, 2.0]).unwrap();
    let ff = p.fundamental_forms();
    let g = gauss_riemann(&ff.hphi, imm.structure().curvature_params().beta);
    let r = p.intrinsic_riemann();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    assert!((g[a][b][c][d] - r[a][b][c][d]).abs() < 1e-6);
                }
            }
        }
    }
    assert!(engine::gauss_intrinsic_defect(&[p]) < 1e-6);
}

#[test]
fn case_i_constants() {
    for eps in [0.0f64, 1.0, 2.0, 5.0] {
        let s = (2.0 * (eps + 3.0)).sqrt() / 4.0;
        let beta = (eps + 3.0) / 4.0;
        for sign in [1.0, -1.0] {
            let t = case_i_fixture(eps, sign);
            assert!(r_dot_phi_h_max(&t, &gauss_riemann(&t, beta)) < 1e-6);
            let rotated = t.in_basis(&case_i_frame(sign));
            let (l, m, res) = engine::h_umbilical_pattern(&rotated, &[1.0, 0.0, 0.0]);
            assert!(res < 1e-12);
            assert!((l + s).abs() < 1e-12 && (m - s).abs() < 1e-12);
        }
        let ab = adapted_basis_form(&case_i_fixture(eps, 1.0)).unwrap();
        assert_eq!(ab.case(1e-8), MultiplicityCase::I);
        assert!((ab.b - (6.0 * (eps + 3.0)).sqrt() / 8.0).abs() < 1e-10);
        assert!(ab.pattern_residual < 1e-7);
    }
}

#[test]
fn case_ii_constants_and_the_correction() {
    let mut seen = 0;
    for beta in [0.5, 1.0, 1.25] {
        for c in [-1.2, -0.5, 0.7, 1.5] {
            let Some((t, a, l2, l3)) = case_ii_fixture(c, beta) else {
                continue;
            };
            seen += 1;
            let (l22, l33, l23) = case_ii_lambdas(a, c, beta);
            assert!((l22 * l33 - l23 * l23).abs() < 1e-10);
            assert!(k_poly(a, c, beta).abs() < 1e-10);
            let rm = gauss_riemann(&t, beta);
            assert!(r_dot_phi_h_max(&t, &rm) < 1e-6);
            let ab = AdaptedBasis {
                axes: vec![
                    vec![1.0, 0.0, 0.0],
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                ],
                lambda1: 2.0 * l3,
                lambda2: l2,
                lambda3: l3,
                a,
                b: 0.0,
                c,
                d: 0.0,
                multiplier: 3.0 * l3,
                eigen_gap: (l2 - l3).abs(),
                degenerate_plane: false,
                pattern_residual: 0.0,
                form: t.clone(),
            };
            assert_eq!(ab.case(1e-8), MultiplicityCase::II);
            let r = identity_records(&ab, beta, &rm, "case-ii");
            assert!(r.get("corrected-identity").unwrap().pass);
            assert!(r.get("K1").unwrap().pass);
            assert!(r.get("case-ii-lambdas").unwrap().pass);
            assert!(r.get("case-ii-k").unwrap().pass);
            // c ≠ 0, a ≠ 2c, λ₂ ≠ λ₃: the superseded form does not vanish
            assert!(!r.get("uncorrected-identity").unwrap().pass);
            let rotated = t.in_basis(&case_ii_frame(l3, c));
            assert!(engine::h_umbilical_pattern(&rotated, &[1.0, 0.0, 0.0]).2 < 1e-10);
        }
    }
    assert!(seen >= 6);
}
