//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.
//!
//! Two criteria fail on purpose: they assert reference values that the
//! geometry does not reproduce (a biharmonic `μ²` at `ε = 2` and a Jacobian
//! determinant formula). The test requires exactly those two to fail, so a
//! regression either way is caught.

use std::f64::consts::PI;
use std::time::Instant;

use biharm_core::basis::{adapted_at, lagrange_determinant, maximize_cubic, r_dot_phi_h_max};
use biharm_core::chart::{chart_coords, chart_tangents, ChartOracle};
use biharm_core::engine::{self, PointGeometry};
use biharm_core::immersion::*;
use biharm_core::sampling::halton_points;
use biharm_core::sasaki::{dot, SasakiStructure};
use biharm_core::solver::*;
use biharm_core::suite::{build_immersion, property_suite, ImmersionParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_FAILURES: [u32; 2] = [3, 7];

fn report(n: u32, pass: bool, detail: String) -> bool {
    println!(
        "criterion {n}: {} {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    pass
}

fn random_point(rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = dot(&v, &v).sqrt();
        let p: Vec<f64> = v.iter().map(|c| c / n).collect();
        if p[7] > -0.5 {
            return p;
        }
    }
}

fn random_tangent(rng: &mut ChaCha8Rng, p: &[f64]) -> Vec<f64> {
    let v: Vec<f64> = (0..8).map(|_| rng.random_range(-1.0..1.0)).collect();
    let r = dot(&v, p);
    v.iter().zip(p).map(|(a, b)| a - r * b).collect()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn geoms(imm: &ExponentialImmersion, n: usize) -> Vec<PointGeometry> {
    engine::sample_geometry(imm, &halton_points(imm.domain(), n, 0)).unwrap()
}

fn nonflat(eps: f64, mu2: f64) -> ExponentialImmersion {
    build_nonflat(&NonFlatFamilyParams {
        epsilon: eps,
        mu: mu2.sqrt(),
    })
    .unwrap()
}

fn criterion_1_ambient() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut curv, mut ident) = (0.0f64, 0.0f64);
    for eps in [-1.0, 1.0, 2.0] {
        let s = SasakiStructure::new(3, eps).unwrap();
        let oracle = ChartOracle::new(s);
        for _ in 0..20 {
            let p = random_point(&mut rng);
            let (x, y, z) = (
                random_tangent(&mut rng, &p),
                random_tangent(&mut rng, &p),
                random_tangent(&mut rng, &p),
            );
            curv = curv.max(max_diff(
                &s.curvature_at(&p, &x, &y, &z),
                &oracle.curvature(&p, &x, &y, &z),
            ));

            let xi = s.xi(&p);
            let (ex, ey) = (s.eta(&p, &x), s.eta(&p, &y));
            let phi2: Vec<f64> = x.iter().zip(&xi).map(|(a, b)| -a + ex * b).collect();
            ident = ident.max(max_diff(&s.phi(&p, &s.phi(&p, &x)), &phi2));
            let lhs = s.g(&p, &s.phi(&p, &x), &s.phi(&p, &y));
            ident = ident.max((lhs - s.g(&p, &x, &y) + ex * ey).abs());
            ident = ident.max((s.g(&p, &xi, &xi) - 1.0).abs());
        }
        for _ in 0..4 {
            let p = random_point(&mut rng);
            let q = chart_coords(&p);
            let t = chart_tangents(&q);
            for (a, b) in [(0, 1), (2, 5), (3, 6), (1, 4)] {
                let rhs = s.g(&p, &t[a], &s.phi(&p, &t[b]));
                ident = ident.max((oracle.d_eta(&q, a, b) - rhs).abs());
            }
        }
    }
    let pass = curv < 1e-6 && ident < 1e-6;
    report(
        1,
        pass,
        format!("curvature {curv:.2e}, structure identities {ident:.2e}"),
    )
}

fn criterion_2_corollary_flat() -> bool {
    let start = Instant::now();
    let imm = corollary_flat();
    let pts = halton_points(imm.domain(), 50, 0);
    let leg = engine::check_legendrian(&imm, &pts).unwrap();
    let g = engine::sample_geometry(&imm, &pts).unwrap();
    let (h, sd) = engine::mean_curvature_stats(&g);
    let cpar = engine::c_parallel_residual(&g);
    let tau2 = engine::bitension_residual(&g);
    let k = engine::max_abs_sectional(&g);
    let secs = start.elapsed().as_secs_f64();
    let pass = leg < 1e-12
        && sd < 1e-10
        && h > 0.1
        && cpar < 1e-6
        && tau2 < 1e-6
        && k < 1e-8
        && secs < 10.0;
    report(
            2,
            pass,
            format!(
                "legendrian {leg:.2e}, |H| {h:.6} (sd {sd:.2e}), c-parallel {cpar:.2e}, tau2 {tau2:.2e}, max|K| {k:.2e}, {secs:.2}s"
            ),
        )
}

fn criterion_3_nonflat() -> bool {
    let printed = (12.0 + 2.0 * 69f64.sqrt()) / 15.0;
    let t1 = engine::bitension_residual(&geoms(&nonflat(1.0, 1.0), 20));
    let t2 = engine::bitension_residual(&geoms(&nonflat(2.0, printed), 20));
    let control = engine::bitension_residual(&geoms(&nonflat(2.0, 1.0), 20));
    let sphere = geoms(&nonflat(1.0, 1.0), 20)
        .iter()
        .map(|p| (p.intrinsic_sectional(1, 2) - 2.0).abs())
        .fold(0.0, f64::max);
    let corrected: Vec<String> = nonflat_mu_corrected(2.0)
        .into_iter()
        .map(|m| {
            format!(
                "{m:.6}->{:.2e}",
                engine::bitension_residual(&geoms(&nonflat(2.0, m), 20))
            )
        })
        .collect();
    let pass = t1 < 1e-6 && t2 < 1e-6 && control > 1e-2 && sphere < 1e-6;
    report(
            3,
            pass,
            format!(
                "tau2(1,1) {t1:.2e}, tau2(2,{printed:.6}) {t2:.2e}, control {control:.2e}, sphere K-2 {sphere:.2e}; corrected mu2 at eps=2: {}",
                corrected.join(", ")
            ),
        )
}

fn criterion_4_system_discrepancy() -> bool {
    let p = corollary_flat_params();
    let c = flat_system_residual(
        1.0,
        p.lambda,
        p.a,
        p.c,
        p.d,
        FlatSystemVariant::LambdaSquaredCorrected,
    );
    let pr = flat_system_residual(1.0, p.lambda, p.a, p.c, p.d, FlatSystemVariant::AsPrinted);
    let worst = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pass = worst < 1e-12 && (pr[0] + 1.0356).abs() < 1e-3;
    report(
        4,
        pass,
        format!("corrected max {worst:.2e}, printed first {:.10}", pr[0]),
    )
}

fn criterion_5_solver() -> bool {
    let cfg = SolverConfig::default();
    let sol = solve_flat(1.0, &cfg).unwrap();
    let p = corollary_flat_params();
    let target = [p.lambda, p.a, p.c, p.d];
    let hit = sol
        .validated
        .iter()
        .any(|r| max_diff(&r.quadruplet(), &target) < 1e-8);
    let oracle = sol
        .validated
        .iter()
        .all(|r| r.bitension < 1e-6 && r.residual_corrected < 1e-9);
    let below = solve_flat(-0.5, &cfg).unwrap();
    let pass = hit && oracle && below.validated.is_empty();
    report(
            5,
            pass,
            format!(
                "eps=1: {} validated, corollary root found {hit}, oracle {oracle}; eps=-0.5: {} validated",
                sol.validated.len(),
                below.validated.len()
            ),
        )
}

fn criterion_6_fixed_examples() -> bool {
    let mut pass = true;
    let mut parts = Vec::new();
    for which in FixedExample::ALL {
        let r = verify_fixed_example(which, 50, 0).unwrap();
        let s = r.summary();
        pass &= r.all_pass();
        parts.push(format!("{which:?} {}/{}", s.passed, s.passed + s.failed));
    }
    report(6, pass, parts.join(", "))
}

fn criterion_7_special_basis() -> bool {
    let imm = corollary_flat();
    let (mut pat, mut mult, mut det_rel, mut det_true, mut ident, mut rphi) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut det = 0.0;
    for p in geoms(&imm, 20) {
        let (ab, rm) = adapted_at(&p).unwrap();
        let ff = p.fundamental_forms();
        let cp = maximize_cubic(&ff).unwrap();
        det = lagrange_determinant(&ff.hphi, &cp);
        pat = pat.max(ab.pattern_residual);
        mult = mult.max((cp.multiplier - 1.5 * ab.lambda1).abs());
        det_rel = det_rel.max(((det - ab.determinant_printed()) / ab.determinant_printed()).abs());
        det_true =
            det_true.max(((det - ab.determinant_formula()) / ab.determinant_formula()).abs());
        ident = ident.max((ab.b * (ab.a - 2.0 * ab.c) * (ab.lambda2 - ab.lambda3)).abs());
        rphi = rphi.max(r_dot_phi_h_max(&ab.form, &rm));
    }
    let pass = pat < 1e-7 && mult < 1e-8 && det_rel < 1e-6 && ident < 1e-8 && rphi < 1e-6;
    report(
            7,
            pass,
            format!(
                "pattern {pat:.2e}, multiplier {mult:.2e}, det {det:.6} vs 36(l2-l1)(l3-l1) rel {det_rel:.2e} (36(2l2-l1)(2l3-l1) rel {det_true:.2e}), identity {ident:.2e}, R.phi h {rphi:.2e}"
            ),
        )
}

fn criterion_8_products_and_closedness() -> bool {
    let mut product = 0.0f64;
    for (src, full) in [
        (ProductSource::CorollaryFlat, corollary_flat()),
        (ProductSource::FixedFlat(1), build_fixed_flat(1).unwrap()),
        (ProductSource::FixedFlat(2), build_fixed_flat(2).unwrap()),
        (ProductSource::FixedFlat(3), build_fixed_flat(3).unwrap()),
    ] {
        let f = product_decomposition(src).unwrap();
        for u in halton_points(full.domain(), 50, 0) {
            product = product.max(max_diff(&f.reassemble(u), &full.value(u)));
        }
    }
    let mut factor = 0.0f64;
    for src in [
        ProductSource::CorollaryFlat,
        ProductSource::FixedFlat(1),
        ProductSource::FixedFlat(2),
        ProductSource::FixedFlat(3),
    ] {
        let s = product_decomposition(src).unwrap().surface;
        factor = factor.max(engine::c_parallel_residual(&geoms(&s, 20)));
    }
    let eps = closedness_epsilon(1, 2).unwrap();
    let roots = nonflat_mu(eps);
    let rational = roots
        .iter()
        .map(|&m| rational_approx(m, 1000))
        .collect::<Vec<_>>();
    let rational_ok = rational.len() == 2
        && rational.iter().all(|r| r.2 < 1e-12)
        && rational.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>() == [(5, 12), (3, 4)];
    let z = legendre_curve(0.75f64.sqrt()).unwrap();
    let gap = max_diff(
        &z.value([0.0; 3]),
        &z.value([4.0 * 3f64.sqrt() * PI, 0.0, 0.0]),
    );
    let disc = nonflat_discriminant(nonflat_epsilon_bound()).abs();
    let pass = product < 1e-12
        && factor < 1e-6
        && (eps - 5.0 / 9.0).abs() < 1e-15
        && rational_ok
        && gap < 1e-9
        && disc < 1e-12;
    report(
            8,
            pass,
            format!(
                "product {product:.2e}, factor c-parallel {factor:.2e}, eps {eps:.12}, mu2 {rational:?}, closing gap {gap:.2e}, discriminant {disc:.2e}"
            ),
        )
}

fn criterion_9_properties() -> bool {
    let mut pass = true;
    let mut failures = Vec::new();
    let mut checked = 0;
    for id in ImmersionId::ALL {
        let imm = build_immersion(id, &ImmersionParams::default()).unwrap();
        let r = property_suite(&imm, 20, 100_000, 0);
        checked += r.records.len();
        for rec in r.records.iter().filter(|r| !r.pass) {
            pass = false;
            failures.push(format!("{id}/{} {:.2e}", rec.check, rec.residual));
        }
    }
    report(
        9,
        pass,
        format!("{checked} records, failures [{}]", failures.join(", ")),
    )
}

fn main() {
    let criteria: [fn() -> bool; 9] = [
        criterion_1_ambient,
        criterion_2_corollary_flat,
        criterion_3_nonflat,
        criterion_4_system_discrepancy,
        criterion_5_solver,
        criterion_6_fixed_examples,
        criterion_7_special_basis,
        criterion_8_products_and_closedness,
        criterion_9_properties,
    ];
    let mut unexpected = Vec::new();
    for (n, run) in (1u32..).zip(criteria) {
        if run() == KNOWN_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    println!("known failures: {KNOWN_FAILURES:?}");
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
