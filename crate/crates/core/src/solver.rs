//! Constraint systems of the classification: the flat four-equation system,
//! the non-flat `μ²` closed form, and the fixed-`ε = 1` examples. The
//! bitension field is the oracle every algebraic root is checked against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{self, PointGeometry};
use crate::error::{GeomError, Result};
use crate::immersion::{
    build_fixed_flat, build_flat, build_nonflat, fixed_nonflat, fixed_quadruplet,
    ExponentialImmersion, FlatFamilyParams, NonFlatFamilyParams,
};
use crate::report::{CheckRecord, VerificationReport};
use crate::sampling::{halton_points, DEFAULT_SAMPLES};
use crate::tolerances;

/// Which first equation of the flat system to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatSystemVariant {
    /// `(3λ² - α⁻¹)(3λ⁴ - 2(ε+1)λ + α⁻²) + λ⁴((a+c)² + d²)`
    AsPrinted,
    /// `(3λ² - α⁻¹)(3λ⁴ - 2(ε+1)λ² + α⁻²) + λ⁴((a+c)² + d²)`
    LambdaSquaredCorrected,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Grid points per variable.
    pub grid: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub seed: u64,
    /// Sample points for the bitension oracle.
    pub samples: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid: 24,
            tolerance: 1e-12,
            max_iterations: 80,
            seed: 0,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid == 0 || self.max_iterations == 0 || self.samples == 0 {
            return Err(GeomError::domain(
                "grid, iterations and samples must be positive",
            ));
        }
        if !(self.tolerance > 0.0) {
            return Err(GeomError::domain("Newton tolerance must be positive"));
        }
        Ok(())
    }
}

/// Left-hand sides of the four flat-system equations.
pub fn flat_system_residual(
    epsilon: f64,
    lambda: f64,
    a: f64,
    c: f64,
    d: f64,
    variant: FlatSystemVariant,
) -> [f64; 4] {
    let ai = (epsilon + 3.0) / 4.0;
    let l2 = lambda * lambda;
    let mid = match variant {
        FlatSystemVariant::AsPrinted => lambda,
        FlatSystemVariant::LambdaSquaredCorrected => l2,
    };
    let s = (a + c).powi(2) + d * d;
    [
        (3.0 * l2 - ai) * (3.0 * l2 * l2 - 2.0 * (epsilon + 1.0) * mid + ai * ai) + l2 * l2 * s,
        (a + c) * (5.0 * l2 + a * a + c * c - 7.0 * ai + 4.0) + c * d * d,
        d * (5.0 * l2 + d * d + 3.0 * c * c + a * c - 7.0 * ai + 4.0),
        ai + l2 + a * c - c * c,
    ]
}

/// Jacobian of the corrected system with respect to `(λ, a, c, d)`.
pub fn flat_jacobian(epsilon: f64, lambda: f64, a: f64, c: f64, d: f64) -> [[f64; 4]; 4] {
    let ai = (epsilon + 3.0) / 4.0;
    let l = lambda;
    let l2 = l * l;
    let l4 = l2 * l2;
    let s = (a + c).powi(2) + d * d;
    let q = 5.0 * l2 + a * a + c * c - 7.0 * ai + 4.0;
    let p = 5.0 * l2 + d * d + 3.0 * c * c + a * c - 7.0 * ai + 4.0;
    let e1l = 6.0 * l * (3.0 * l4 - 2.0 * (epsilon + 1.0) * l2 + ai * ai)
        + (3.0 * l2 - ai) * (12.0 * l2 * l - 4.0 * (epsilon + 1.0) * l)
        + 4.0 * l2 * l * s;
    [
        [e1l, 2.0 * l4 * (a + c), 2.0 * l4 * (a + c), 2.0 * l4 * d],
        [
            10.0 * l * (a + c),
            q + 2.0 * a * (a + c),
            q + 2.0 * c * (a + c) + d * d,
            2.0 * c * d,
        ],
        [10.0 * l * d, d * c, d * (6.0 * c + a), p + 2.0 * d * d],
        [2.0 * l, c, a - 2.0 * c, 0.0],
    ]
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn solve4(j: [[f64; 4]; 4], f: [f64; 4]) -> Option<[f64; 4]> {
    let m = nalgebra::Matrix4::from_fn(|r, c| j[r][c]);
    let rhs = nalgebra::Vector4::from_column_slice(&f);
    m.lu().solve(&rhs).map(|x| [x[0], x[1], x[2], x[3]])
}

/// Damped Newton on the corrected system: full steps, halved while the
/// residual grows.
fn newton(epsilon: f64, x0: [f64; 4], cfg: &SolverConfig) -> Option<[f64; 4]> {
    let variant = FlatSystemVariant::LambdaSquaredCorrected;
    let f = |x: &[f64; 4]| flat_system_residual(epsilon, x[0], x[1], x[2], x[3], variant);
    let mut x = x0;
    let mut fx = f(&x);
    let mut r = max_abs(&fx);
    for _ in 0..cfg.max_iterations {
        if r < cfg.tolerance {
            return Some(x);
        }
        let step = solve4(flat_jacobian(epsilon, x[0], x[1], x[2], x[3]), fx)?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let y = std::array::from_fn(|i| x[i] - t * step[i]);
            let fy = f(&y);
            let ry = max_abs(&fy);
            if ry.is_finite() && ry < r {
                x = y;
                fx = fy;
                r = ry;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r < cfg.tolerance).then_some(x)
}

/// One root of the flat system with its diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatRoot {
    pub epsilon: f64,
    pub lambda: f64,
    pub a: f64,
    pub c: f64,
    pub d: f64,
    /// Max-abs residual of the as-printed system.
    pub residual_printed: f64,
    /// Max-abs residual of the corrected system.
    pub residual_corrected: f64,
    /// Max `‖τ₂‖` over the oracle samples; NaN if the immersion could not be built.
    pub bitension: f64,
    /// `|λ² - 1/(3α)|`.
    pub margin: f64,
    /// Mean-curvature norm of the immersion; NaN if it could not be built.
    pub mean_curvature: f64,
}

impl FlatRoot {
    pub fn params(&self) -> FlatFamilyParams {
        FlatFamilyParams {
            epsilon: self.epsilon,
            lambda: self.lambda,
            a: self.a,
            c: self.c,
            d: self.d,
        }
    }

    pub fn quadruplet(&self) -> [f64; 4] {
        [self.lambda, self.a, self.c, self.d]
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FlatSolution {
    /// Roots whose immersion passes the bitension oracle.
    pub validated: Vec<FlatRoot>,
    /// Roots of the algebra that fail the oracle.
    pub algebra_only: Vec<FlatRoot>,
}

/// Grid starting points over the constraint box.
fn grid_starts(epsilon: f64, cfg: &SolverConfig) -> Vec<[f64; 4]> {
    let alpha = 4.0 / (epsilon + 3.0);
    let n = cfg.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shift: [f64; 4] = std::array::from_fn(|_| rng.random::<f64>());
    let at = |i: usize, k: usize| (i as f64 + shift[k]) / n as f64;
    let c_floor = -(2.0 / alpha).sqrt() - 1.0;
    let mut out = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        let lambda = -at(i, 0) / alpha.sqrt();
        let a_max = (lambda * lambda - alpha) / lambda;
        for j in 0..n {
            let a = at(j, 1) * a_max;
            for k in 0..n {
                let c = c_floor + at(k, 2) * (a / 2.0 - c_floor);
                for l in 0..n {
                    out.push([lambda, a, c, at(l, 3) * a]);
                }
            }
        }
    }
    out
}

/// Roots closer than this to `λ² = 1/(3α)` are discarded. The system has a
/// singular root there and Newton leaves a cloud of slowly converged
/// approximations around it.
pub const SINGULAR_MARGIN: f64 = 1e-4;

fn admissible(epsilon: f64, x: &[f64; 4]) -> bool {
    let p = FlatFamilyParams {
        epsilon,
        lambda: x[0],
        a: x[1],
        c: x[2],
        d: x[3],
    };
    let alpha = p.alpha();
    let tol = tolerances::STRUCTURE;
    (p.lambda * p.lambda - 1.0 / (3.0 * alpha)).abs() >= SINGULAR_MARGIN
        && p.lambda > -1.0 / alpha.sqrt()
        && p.lambda < 0.0
        && p.a > 0.0
        && p.a <= p.a_max() + tol
        && p.d <= p.a + tol
        && p.a > 2.0 * p.c
}

/// Max `‖τ₂‖` over `samples` points of the domain.
pub fn bitension_oracle(imm: &ExponentialImmersion, samples: usize, seed: u64) -> Result<f64> {
    let pts = halton_points(imm.domain(), samples, seed);
    let geoms = engine::sample_geometry(imm, &pts)?;
    Ok(engine::bitension_residual(&geoms))
}

/// Roots of the corrected flat system inside the constraint box, split by the
/// bitension oracle.
pub fn solve_flat(epsilon: f64, cfg: &SolverConfig) -> Result<FlatSolution> {
    if !(epsilon > -3.0) {
        return Err(GeomError::domain(format!(
            "ε must exceed -3, got {epsilon}"
        )));
    }
    cfg.validate()?;
    let starts = grid_starts(epsilon, cfg);
    let mut roots: Vec<[f64; 4]> = starts
        .par_iter()
        .filter_map(|x0| newton(epsilon, *x0, cfg))
        .map(|mut x| {
            x[3] = x[3].abs();
            x
        })
        .filter(|x| admissible(epsilon, x))
        .collect();
    roots.sort_by(|p, q| p.partial_cmp(q).expect("finite roots"));
    let mut unique: Vec<[f64; 4]> = Vec::new();
    for r in roots {
        let close = unique.iter().any(|u| {
            u.iter()
                .zip(&r)
                .map(|(p, q)| (p - q).powi(2))
                .sum::<f64>()
                .sqrt()
                < 1e-8
        });
        if !close {
            unique.push(r);
        }
    }
    let alpha = 4.0 / (epsilon + 3.0);
    let mut out = FlatSolution::default();
    for x in unique {
        let printed = flat_system_residual(
            epsilon,
            x[0],
            x[1],
            x[2],
            x[3],
            FlatSystemVariant::AsPrinted,
        );
        let corrected = flat_system_residual(
            epsilon,
            x[0],
            x[1],
            x[2],
            x[3],
            FlatSystemVariant::LambdaSquaredCorrected,
        );
        let mut root = FlatRoot {
            epsilon,
            lambda: x[0],
            a: x[1],
            c: x[2],
            d: x[3],
            residual_printed: max_abs(&printed),
            residual_corrected: max_abs(&corrected),
            bitension: f64::NAN,
            margin: (x[0] * x[0] - 1.0 / (3.0 * alpha)).abs(),
            mean_curvature: f64::NAN,
        };
        if let Ok(imm) = build_flat(&root.params()) {
            let pts = halton_points(imm.domain(), cfg.samples, cfg.seed);
            if let Ok(geoms) = engine::sample_geometry(&imm, &pts) {
                root.bitension = engine::bitension_residual(&geoms);
                root.mean_curvature = engine::mean_curvature_stats(&geoms).0;
            }
        }
        if root.bitension < tolerances::FOURTH_ORDER {
            out.validated.push(root);
        } else {
            out.algebra_only.push(root);
        }
    }
    Ok(out)
}

/// `13ε² + 14ε - 11`.
pub fn nonflat_discriminant(epsilon: f64) -> f64 {
    13.0 * epsilon * epsilon + 14.0 * epsilon - 11.0
}

/// Smallest admissible `ε` of the non-flat family, `(-7 + 8√3)/13`.
pub fn nonflat_epsilon_bound() -> f64 {
    (-7.0 + 8.0 * 3f64.sqrt()) / 13.0
}

fn mu2_roots(epsilon: f64, k: f64) -> Vec<f64> {
    // the radicand is positive again below (-7 - 8√3)/13, where the formula
    // has positive roots that are not biharmonic
    if epsilon < nonflat_epsilon_bound() - tolerances::ALGEBRAIC {
        return Vec::new();
    }
    let mut disc = nonflat_discriminant(epsilon);
    if disc < 0.0 && disc > -tolerances::ALGEBRAIC {
        disc = 0.0;
    }
    if disc < 0.0 {
        return Vec::new();
    }
    let den = 3.0 * (3.0 + epsilon);
    let r = k * disc.sqrt();
    let mut out: Vec<f64> = [
        (4.0 * epsilon + 4.0 - r) / den,
        (4.0 * epsilon + 4.0 + r) / den,
    ]
    .into_iter()
    .filter(|m| *m > 0.0)
    .collect();
    out.dedup();
    out
}

/// `μ² = (4ε + 4 ± 2√(13ε² + 14ε - 11))/(3(3+ε))` with the stated value
/// `{1}` at `ε = 1`; empty below `ε = (-7 + 8√3)/13`.
pub fn nonflat_mu(epsilon: f64) -> Vec<f64> {
    if epsilon == 1.0 {
        return vec![1.0];
    }
    mu2_roots(epsilon, 2.0)
}

/// `μ² = (4ε + 4 ± √(13ε² + 14ε - 11))/(3(3+ε))`, the values at which the
/// non-flat family is biharmonic. The smaller root times the larger is `1/3`
/// when both exist; `μ² = 1/3` gives a minimal immersion.
pub fn nonflat_mu_corrected(epsilon: f64) -> Vec<f64> {
    mu2_roots(epsilon, 1.0)
}

/// Fixed grid on which scans evaluate the bitension.
pub const SCAN_POINTS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuSample {
    pub mu2: f64,
    /// Max `‖τ₂‖` over the scan grid.
    pub residual: f64,
    /// Mean-curvature norm (constant on the family).
    pub mean_curvature: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MuScan {
    pub epsilon: f64,
    pub samples: Vec<MuSample>,
    /// Local minima of the residual curve, refined by golden-section search.
    pub minima: Vec<MuSample>,
}

/// Residual and `‖H‖` of the non-flat immersion at `μ²`.
pub fn mu_sample(epsilon: f64, mu2: f64) -> Result<MuSample> {
    let imm = build_nonflat(&NonFlatFamilyParams {
        epsilon,
        mu: mu2.sqrt(),
    })?;
    let pts = halton_points(imm.domain(), SCAN_POINTS, 0);
    let geoms = engine::sample_geometry(&imm, &pts)?;
    Ok(MuSample {
        mu2,
        residual: engine::bitension_residual(&geoms),
        mean_curvature: engine::mean_curvature_stats(&geoms).0,
    })
}

fn golden(epsilon: f64, mut lo: f64, mut hi: f64) -> Result<MuSample> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = mu_sample(epsilon, x1)?;
    let mut f2 = mu_sample(epsilon, x2)?;
    while hi - lo > 1e-7 {
        if f1.residual <= f2.residual {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = mu_sample(epsilon, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = mu_sample(epsilon, x2)?;
        }
    }
    Ok(if f1.residual <= f2.residual { f1 } else { f2 })
}

/// Samples `‖τ₂‖` of the non-flat family on `steps + 1` evenly spaced `μ²`
/// in `[mu2_min, mu2_max]` and locates its local minima.
pub fn scan_mu(epsilon: f64, mu2_min: f64, mu2_max: f64, steps: usize) -> Result<MuScan> {
    if !(mu2_min > 0.0 && mu2_max > mu2_min) || steps == 0 {
        return Err(GeomError::domain(
            "scan needs 0 < mu2_min < mu2_max and steps > 0",
        ));
    }
    let h = (mu2_max - mu2_min) / steps as f64;
    let samples = (0..=steps)
        .map(|k| mu_sample(epsilon, mu2_min + k as f64 * h))
        .collect::<Result<Vec<_>>>()?;
    let mut minima = Vec::new();
    for k in 0..samples.len() {
        let r = samples[k].residual;
        let left = k == 0 || samples[k - 1].residual > r;
        let right = k + 1 == samples.len() || samples[k + 1].residual > r;
        if left && right {
            let lo = samples[k.saturating_sub(1)].mu2;
            let hi = samples[(k + 1).min(samples.len() - 1)].mu2;
            minima.push(golden(epsilon, lo, hi)?);
        }
    }
    Ok(MuScan {
        epsilon,
        samples,
        minima,
    })
}

/// Members of the fixed-`ε = 1` example list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedExample {
    Flat(u8),
    NonflatPlus,
    NonflatMinus,
}

impl FixedExample {
    pub const ALL: [FixedExample; 5] = [
        FixedExample::Flat(1),
        FixedExample::Flat(2),
        FixedExample::Flat(3),
        FixedExample::NonflatPlus,
        FixedExample::NonflatMinus,
    ];

    pub fn build(self) -> Result<ExponentialImmersion> {
        match self {
            FixedExample::Flat(k) => build_fixed_flat(k),
            FixedExample::NonflatPlus => Ok(fixed_nonflat(true)),
            FixedExample::NonflatMinus => Ok(fixed_nonflat(false)),
        }
    }
}

/// Margins of `a > 2c`, `a ≥ d`, `d ≥ 0`, `λ > -1`, `λ < 0` as records
/// passing iff the margin is positive (strict) or non-negative.
pub fn margin_records(p: &FlatFamilyParams, immersion: &str) -> Vec<CheckRecord> {
    let tol = tolerances::ALGEBRAIC;
    let rec = |name: &str, m: f64, strict: bool, claim: &str| {
        CheckRecord::new(name, immersion, -m, if strict { 0.0 } else { tol }, 1)
            .with_claim(format!("{claim}; margin {m:.12}"))
    };
    vec![
        rec("margin-a-2c", p.a - 2.0 * p.c, true, "a > 2c"),
        rec("margin-a-d", p.a - p.d, false, "a ≥ d"),
        rec("margin-d", p.d, false, "d ≥ 0"),
        rec("margin-lambda-lower", p.lambda + 1.0, true, "λ > -1"),
        rec("margin-lambda-upper", -p.lambda, true, "λ < 0"),
    ]
}

/// Legendrian, C-parallel, non-minimal and `Tr h(·, A_H ·) = 6H` checks,
/// plus constraint margins for the flat members.
pub fn verify_fixed_example(
    which: FixedExample,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let imm = which.build()?;
    let label = imm.label().to_string();
    let pts = halton_points(imm.domain(), samples, seed);
    let geoms = engine::sample_geometry(&imm, &pts)?;
    let mut r = VerificationReport::new();
    let leg = geoms
        .iter()
        .map(PointGeometry::legendrian_defect)
        .fold(0.0, f64::max);
    r.push(CheckRecord::new(
        "legendrian",
        &label,
        leg,
        tolerances::ALGEBRAIC,
        samples,
    ));
    r.push(CheckRecord::new(
        "c-parallel",
        &label,
        engine::c_parallel_residual(&geoms),
        tolerances::FOURTH_ORDER,
        samples,
    ));
    let hmin = geoms
        .iter()
        .map(|g| g.fundamental_forms().mean_curvature_norm)
        .fold(f64::INFINITY, f64::min);
    r.push(CheckRecord::lower_bound(
        "non-minimal",
        &label,
        hmin,
        tolerances::NON_MINIMAL,
        samples,
    ));
    r.push(CheckRecord::new(
        "condition-6h",
        &label,
        engine::condition_6h_residual(&geoms),
        tolerances::FOURTH_ORDER,
        samples,
    ));
    if let FixedExample::Flat(k) = which {
        r.records
            .extend(margin_records(&fixed_quadruplet(k)?, &label));
    }
    Ok(r)
}

/// Best rational approximation `p/q` with `q ≤ max_den` from the continued
/// fraction expansion, and its error.
pub fn rational_approx(x: f64, max_den: i64) -> (i64, i64, f64) {
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    loop {
        let a = r.floor();
        let (p2, q2) = (a as i64 * p1 + p0, a as i64 * q1 + q0);
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return (x.round() as i64, 1, (x - x.round()).abs());
    }
    (p1, q1, (x - p1 as f64 / q1 as f64).abs())
}
