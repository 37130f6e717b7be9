use std::f64::consts::PI;

use biharm_core::engine::{self, PointGeometry};
use biharm_core::finite_diff::derivative_vec;
use biharm_core::immersion::*;
use biharm_core::sampling::halton_points;
use biharm_core::solver::{nonflat_mu, rational_approx};
use biharm_core::GeomError;

#[test]
fn every_fixed_immersion_stays_on_the_sphere() {
    for id in ImmersionId::ALL {
        if let Some(imm) = id.build_fixed() {
            assert!(imm.max_norm_deviation(1000) < 1e-12, "{id}");
        }
    }
}

#[test]
fn jet_derivatives_match_finite_differences() {
    let imm = corollary_flat();
    let u = [0.3, -1.1, 2.2];
    for var in 0..3 {
        let mut dir = [0usize; 3];
        dir[var] = 1;
        let exact = imm.derivative(u, dir).unwrap();
        let fd = derivative_vec(
            |t| {
                let mut v = u;
                v[var] = t;
                imm.value(v)
            },
            u[var],
            1e-3,
        );
        for (k, z) in exact.iter().enumerate() {
            assert!((z.re - fd[2 * k]).abs() < 1e-9);
            assert!((z.im - fd[2 * k + 1]).abs() < 1e-9);
        }
    }
}

#[test]
fn unknown_ids_are_rejected() {
    assert!(matches!(
        "torus".parse::<ImmersionId>(),
        Err(GeomError::UnknownImmersion(_))
    ));
    for id in ImmersionId::ALL {
        assert_eq!(id.to_string().parse::<ImmersionId>().unwrap(), id);
    }
}

#[test]
fn product_decompositions_reassemble() {
    let sources = [
        (ProductSource::CorollaryFlat, corollary_flat()),
        (ProductSource::FixedFlat(1), build_fixed_flat(1).unwrap()),
        (ProductSource::FixedFlat(2), build_fixed_flat(2).unwrap()),
        (ProductSource::FixedFlat(3), build_fixed_flat(3).unwrap()),
    ];
    for (src, full) in sources {
        let f = product_decomposition(src).unwrap();
        for u in halton_points(full.domain(), 100, 3) {
            let a = f.reassemble(u);
            let b = full.value(u);
            let err = a
                .iter()
                .zip(&b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-12, "{src:?}: {err}");
        }
    }
}

#[test]
fn factor_surfaces_are_c_parallel_in_s5() {
    for src in [
        ProductSource::CorollaryFlat,
        ProductSource::FixedFlat(1),
        ProductSource::FixedFlat(3),
    ] {
        let f = product_decomposition(src).unwrap();
        assert_eq!(f.surface.structure().n(), 2);
        let pts = halton_points(f.surface.domain(), 20, 0);
        let geoms = engine::sample_geometry(&f.surface, &pts).unwrap();
        assert!(engine::c_parallel_residual(&geoms) < 1e-6, "{src:?}");
        assert!(engine::check_legendrian(&f.surface, &pts).unwrap() < 1e-12);
    }
}

#[test]
fn legendre_curve_is_a_geodesic_only_at_mu_one() {
    let curvature = |mu: f64| {
        let c = legendre_curve(mu).unwrap();
        let g = PointGeometry::new(&c, [0.7, 0.0, 0.0]).unwrap();
        assert!(g.legendrian_defect() < 1e-13);
        g.fundamental_forms().mean_curvature_norm
    };
    assert!(curvature(1.0) < 1e-12);
    assert!(curvature(2f64.sqrt()) > 0.1);
    assert!(curvature(0.5) > 0.1);
}

#[test]
fn closedness_at_five_ninths() {
    let eps = closedness_epsilon(1, 2).unwrap();
    assert!((eps - 5.0 / 9.0).abs() < 1e-15);
    let roots = nonflat_mu(eps);
    let rationals: Vec<(i64, i64)> = roots
        .iter()
        .map(|&m| {
            let (p, q, err) = rational_approx(m, 1000);
            assert!(err < 1e-12);
            (p, q)
        })
        .collect();
    assert_eq!(rationals, vec![(5, 12), (3, 4)]);

    let z = legendre_curve(0.75f64.sqrt()).unwrap();
    let a = z.value([0.0; 3]);
    let b = z.value([4.0 * 3f64.sqrt() * PI, 0.0, 0.0]);
    let gap = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(gap < 1e-9, "{gap}");
}

#[test]
fn closedness_denominator() {
    assert!(closedness_epsilon(0, 0).is_err());
    assert!(closedness_epsilon(1, 0).is_ok());
}

#[test]
fn flat_family_rejects_points_outside_the_box() {
    let base = corollary_flat_params();
    let cases: [(fn(&mut FlatFamilyParams), &str); 4] = [
        (|p| p.lambda = 0.1, "-1/√α<λ<0"),
        (|p| p.d = p.a + 0.5, "a≥d≥0"),
        (|p| p.c = p.a, "a>2c"),
        (|p| p.epsilon = -4.0, "ε>-3"),
    ];
    for (mutate, name) in cases {
        let mut p = base;
        mutate(&mut p);
        match build_flat(&p) {
            Err(GeomError::Constraint { constraint }) => assert_eq!(constraint, name),
            Err(GeomError::Domain(_)) if name == "ε>-3" => {}
            other => panic!("{name}: {other:?}"),
        }
    }
}
