//! Explicit Legendrian immersions into `S^7(ε)` and related curves and surfaces.
//!
//! Every family is an [`ExponentialImmersion`]: each complex coordinate is
//! `A · e^{i(k·u + θ)}`, optionally multiplied by one component of a round
//! sphere chart. Derivatives of every order up to four are exact.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{GeomError, Result};
use crate::jet::{Jet, MAX_ORDER, NVARS};
use crate::sasaki::SasakiStructure;
use crate::tolerances;

/// Colatitude margin keeping the `S²` chart away from its poles.
pub const POLE_MARGIN: f64 = 0.1;

/// A round unit sphere `S^k ⊂ ℝ^{k+1}` in polar coordinates, occupying
/// domain variables `first_var .. first_var + k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereFactor {
    pub dim: usize,
    pub first_var: usize,
}

impl SphereFactor {
    pub fn new(dim: usize, first_var: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) || first_var + dim > NVARS {
            return Err(GeomError::domain(format!(
                "unsupported sphere factor S^{dim} at variable {first_var}"
            )));
        }
        Ok(Self { dim, first_var })
    }

    /// Components `y_0..y_k` as jets of the domain variables.
    pub fn jets(&self, vars: &[Jet; NVARS]) -> Vec<Jet> {
        let a = &vars[self.first_var..self.first_var + self.dim];
        match self.dim {
            1 => vec![a[0].cos(), a[0].sin()],
            // (sin θ cos φ, sin θ sin φ, cos θ)
            2 => {
                let s = a[0].sin();
                vec![s * a[1].cos(), s * a[1].sin(), a[0].cos()]
            }
            _ => {
                let s0 = a[0].sin();
                let s01 = s0 * a[1].sin();
                vec![
                    a[0].cos(),
                    s0 * a[1].cos(),
                    s01 * a[2].cos(),
                    s01 * a[2].sin(),
                ]
            }
        }
    }

    /// Sampling box of the chart variables.
    pub fn chart_box(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|i| {
                if i + 1 == self.dim {
                    (-PI, PI)
                } else {
                    (POLE_MARGIN, PI - POLE_MARGIN)
                }
            })
            .collect()
    }
}

/// One complex coordinate `A e^{i(k·u + θ)} [· y_slot]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub amplitude: f64,
    pub freq: [f64; NVARS],
    pub phase: f64,
    pub sphere_slot: Option<usize>,
}

impl ExpTerm {
    /// A term with a signed coefficient; a negative sign becomes phase `π`.
    pub fn signed(coef: f64, freq: [f64; NVARS]) -> Self {
        Self {
            amplitude: coef.abs(),
            freq,
            phase: if coef < 0.0 { PI } else { 0.0 },
            sphere_slot: None,
        }
    }

    pub fn on_sphere(mut self, slot: usize) -> Self {
        self.sphere_slot = Some(slot);
        self
    }
}

/// An analytic map from (a box in) `ℝ^m`, `m ≤ 3`, into the unit sphere of
/// `ℂ^{n+1}`, carrying the φ-sectional curvature of its target structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentialImmersion {
    label: String,
    epsilon: f64,
    domain_dim: usize,
    terms: Vec<ExpTerm>,
    sphere: Option<SphereFactor>,
    domain: Vec<(f64, f64)>,
}

impl ExponentialImmersion {
    pub fn new(
        label: impl Into<String>,
        epsilon: f64,
        domain_dim: usize,
        terms: Vec<ExpTerm>,
        sphere: Option<SphereFactor>,
    ) -> Result<Self> {
        if !(1..=NVARS).contains(&domain_dim) {
            return Err(GeomError::domain(format!("domain dimension {domain_dim}")));
        }
        if !(2..=4).contains(&terms.len()) {
            return Err(GeomError::domain("target must be ℂ² .. ℂ⁴"));
        }
        SasakiStructure::new(terms.len() - 1, epsilon)?;
        if let Some(sf) = sphere {
            if sf.first_var + sf.dim > domain_dim {
                return Err(GeomError::domain("sphere chart exceeds the domain"));
            }
            if terms
                .iter()
                .any(|t| t.sphere_slot.is_some_and(|s| s > sf.dim))
            {
                return Err(GeomError::domain("sphere slot out of range"));
            }
        } else if terms.iter().any(|t| t.sphere_slot.is_some()) {
            return Err(GeomError::domain("sphere slot without a sphere factor"));
        }
        let mut domain: Vec<(f64, f64)> = vec![(0.0, 2.0 * PI); domain_dim];
        if let Some(sf) = sphere {
            for (i, b) in sf.chart_box().into_iter().enumerate() {
                domain[sf.first_var + i] = b;
            }
        }
        let imm = Self {
            label: label.into(),
            epsilon,
            domain_dim,
            terms,
            sphere,
            domain,
        };
        let dev = imm.max_norm_deviation(64);
        if !(dev < tolerances::ALGEBRAIC) {
            return Err(GeomError::constraint(format!(
                "image must lie on the unit sphere (max |‖f‖-1| = {dev:e})"
            )));
        }
        Ok(imm)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same map viewed in a different target structure.
    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        SasakiStructure::new(self.terms.len() - 1, epsilon)?;
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn structure(&self) -> SasakiStructure {
        SasakiStructure::new(self.terms.len() - 1, self.epsilon).expect("validated at construction")
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn sphere(&self) -> Option<SphereFactor> {
        self.sphere
    }

    /// Sampling box per domain variable.
    pub fn domain(&self) -> &[(f64, f64)] {
        &self.domain
    }

    /// Restricts the sampling box.
    pub fn with_domain(mut self, domain: Vec<(f64, f64)>) -> Result<Self> {
        if domain.len() != self.domain_dim {
            return Err(GeomError::domain("domain box has the wrong dimension"));
        }
        self.domain = domain;
        Ok(self)
    }

    /// Real ambient dimension `2(n+1)`.
    pub fn real_dim(&self) -> usize {
        2 * self.terms.len()
    }

    /// Interleaved real coordinates of `f(u)` as jets around `u`.
    pub fn jets(&self, u: [f64; NVARS]) -> Vec<Jet> {
        let vars: [Jet; NVARS] = std::array::from_fn(|k| {
            if k < self.domain_dim {
                Jet::variable(k, u[k])
            } else {
                Jet::constant(u[k])
            }
        });
        let sphere = self.sphere.map(|s| s.jets(&vars));
        let mut out = Vec::with_capacity(self.real_dim());
        for t in &self.terms {
            let mut theta = Jet::constant(t.phase);
            for (k, v) in vars.iter().enumerate().take(self.domain_dim) {
                if t.freq[k] != 0.0 {
                    theta += *v * t.freq[k];
                }
            }
            let (mut re, mut im) = (theta.cos() * t.amplitude, theta.sin() * t.amplitude);
            if let (Some(slot), Some(y)) = (t.sphere_slot, sphere.as_ref()) {
                re = re * y[slot];
                im = im * y[slot];
            }
            out.push(re);
            out.push(im);
        }
        out
    }

    /// Interleaved real coordinates of `f(u)`.
    pub fn value(&self, u: [f64; NVARS]) -> Vec<f64> {
        let sphere = self.sphere.map(|s| {
            let vars: [Jet; NVARS] = std::array::from_fn(|k| Jet::constant(u[k]));
            s.jets(&vars).iter().map(|j| j.value()).collect::<Vec<_>>()
        });
        let mut out = Vec::with_capacity(self.real_dim());
        for t in &self.terms {
            let theta: f64 = t.phase + (0..self.domain_dim).map(|k| t.freq[k] * u[k]).sum::<f64>();
            let mut a = t.amplitude;
            if let (Some(slot), Some(y)) = (t.sphere_slot, sphere.as_ref()) {
                a *= y[slot];
            }
            out.push(a * theta.cos());
            out.push(a * theta.sin());
        }
        out
    }

    /// Complex coordinates of `f(u)`.
    pub fn complex_value(&self, u: [f64; NVARS]) -> Vec<Complex64> {
        self.value(u)
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect()
    }

    /// Exact partial derivative `∂^order f(u)` in `ℂ^{n+1}`.
    pub fn derivative(&self, u: [f64; NVARS], order: [usize; NVARS]) -> Result<Vec<Complex64>> {
        if order.iter().sum::<usize>() > MAX_ORDER {
            return Err(GeomError::domain(format!(
                "derivative order {order:?} exceeds {MAX_ORDER}"
            )));
        }
        if order
            .iter()
            .enumerate()
            .any(|(k, &o)| k >= self.domain_dim && o > 0)
        {
            return Err(GeomError::domain(
                "derivative along a missing domain variable",
            ));
        }
        let jets = self.jets(u);
        Ok(jets
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0].partial(order).unwrap(), p[1].partial(order).unwrap()))
            .collect())
    }

    /// Largest `|‖f(u)‖ - 1|` over a deterministic grid of `count` points.
    pub fn max_norm_deviation(&self, count: usize) -> f64 {
        crate::sampling::halton_points(self.domain(), count, 0)
            .into_iter()
            .map(|u| {
                let v = self.value(u);
                (v.iter().map(|c| c * c).sum::<f64>().sqrt() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Parameters of the flat family in `S^7(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatFamilyParams {
    pub epsilon: f64,
    pub lambda: f64,
    pub a: f64,
    pub c: f64,
    pub d: f64,
}

/// `ρ₁, ρ₂ = (√(4c(2c-a)+d²) ± d)/2`.
pub fn rho_pair(a: f64, c: f64, d: f64) -> Option<(f64, f64)> {
    let rad = 4.0 * c * (2.0 * c - a) + d * d;
    if rad < 0.0 {
        return None;
    }
    let s = rad.sqrt();
    Some(((s + d) / 2.0, (s - d) / 2.0))
}

impl FlatFamilyParams {
    pub fn alpha(&self) -> f64 {
        4.0 / (self.epsilon + 3.0)
    }

    pub fn rho(&self) -> Option<(f64, f64)> {
        rho_pair(self.a, self.c, self.d)
    }

    /// Upper bound `(λ² - α)/λ` on `a`.
    pub fn a_max(&self) -> f64 {
        (self.lambda * self.lambda - self.alpha()) / self.lambda
    }

    /// `α⁻¹ + λ² + ac - c²`, which vanishes iff the image is on the sphere.
    pub fn unit_norm_residual(&self) -> f64 {
        1.0 / self.alpha() + self.lambda * self.lambda + self.a * self.c - self.c * self.c
    }

    /// Checks the admissibility inequalities, naming the first violated one.
    pub fn validate(&self) -> Result<()> {
        const SLACK: f64 = 1e-12;
        if !(self.epsilon > -3.0) {
            return Err(GeomError::constraint("ε>-3"));
        }
        let alpha = self.alpha();
        let l = self.lambda;
        if !(l > -1.0 / alpha.sqrt() && l < 0.0) {
            return Err(GeomError::constraint("-1/√α<λ<0"));
        }
        if !(self.a > 0.0 && self.a <= self.a_max() + SLACK) {
            return Err(GeomError::constraint("0<a≤(λ²-α)/λ"));
        }
        if !(self.d >= 0.0 && self.a >= self.d - SLACK) {
            return Err(GeomError::constraint("a≥d≥0"));
        }
        if !(self.a > 2.0 * self.c) {
            return Err(GeomError::constraint("a>2c"));
        }
        if ((l * l) - 1.0 / (3.0 * alpha)).abs() < SLACK {
            return Err(GeomError::constraint("λ²≠1/(3α)"));
        }
        match self.rho() {
            None => Err(GeomError::constraint("4c(2c-a)+d²≥0")),
            Some((_, r2)) if !(r2 > 0.0) => Err(GeomError::constraint("ρ₁≥ρ₂>0")),
            Some(_) => Ok(()),
        }
    }
}

/// Builds the flat family from admissible parameters.
pub fn build_flat(p: &FlatFamilyParams) -> Result<ExponentialImmersion> {
    p.validate()?;
    if p.unit_norm_residual().abs() > tolerances::ALGEBRAIC {
        return Err(GeomError::constraint("α⁻¹+λ²+ac-c²=0"));
    }
    let alpha = p.alpha();
    let (l, a, c) = (p.lambda, p.a, p.c);
    let (r1, r2) = p.rho().expect("validated");
    let terms = vec![
        ExpTerm::signed(
            l / (l * l + 1.0 / alpha).sqrt(),
            [1.0 / (alpha * l), 0.0, 0.0],
        ),
        ExpTerm::signed(
            1.0 / (alpha * (c - a) * (2.0 * c - a)).sqrt(),
            [-l, c - a, 0.0],
        ),
        ExpTerm::signed(1.0 / (alpha * r1 * (r1 + r2)).sqrt(), [-l, -c, -r1]),
        ExpTerm::signed(1.0 / (alpha * r2 * (r1 + r2)).sqrt(), [-l, -c, r2]),
    ];
    ExponentialImmersion::new("thm1-flat", p.epsilon, 3, terms, None)
        .map_err(|_| GeomError::constraint("α⁻¹+λ²+ac-c²=0"))
}

/// Parameters of the non-flat family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonFlatFamilyParams {
    pub epsilon: f64,
    pub mu: f64,
}

/// `f(x, y) = (√(μ²/(μ²+1)) e^{-ix/μ}, √(1/(μ²+1)) e^{iμx} y)` with `y ∈ S²`
/// in colatitude/longitude coordinates.
pub fn build_nonflat(p: &NonFlatFamilyParams) -> Result<ExponentialImmersion> {
    if !(p.mu > 0.0) || !p.mu.is_finite() {
        return Err(GeomError::domain(format!(
            "μ must be positive, got {}",
            p.mu
        )));
    }
    let mu2 = p.mu * p.mu;
    let a = (mu2 / (mu2 + 1.0)).sqrt();
    let b = (1.0 / (mu2 + 1.0)).sqrt();
    let mut terms = vec![ExpTerm::signed(a, [-1.0 / p.mu, 0.0, 0.0])];
    for slot in 0..3 {
        terms.push(ExpTerm::signed(b, [p.mu, 0.0, 0.0]).on_sphere(slot));
    }
    ExponentialImmersion::new(
        "thm1-nonflat",
        p.epsilon,
        3,
        terms,
        Some(SphereFactor::new(2, 1)?),
    )
}

fn dd(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

/// One of the three flat `(λ, a, c, d)` quadruplets over `S^7(1)`, with the
/// radicals evaluated in double-double precision and rounded once.
pub fn fixed_quadruplet(which: u8) -> Result<FlatFamilyParams> {
    let r13 = dd(13.0).sqrt();
    let r3 = dd(3.0).sqrt();
    let (l, a, c, d) = match which {
        1 => {
            let l = -((dd(4.0) - r13) / 3.0).sqrt();
            let a = ((dd(7.0) - r13) / 6.0).sqrt();
            (l, a, -a, dd(0.0))
        }
        2 => (
            -(dd(1.0) / (dd(5.0) + r3 * 2.0)).sqrt(),
            ((dd(45.0) + r3 * 21.0) / 13.0).sqrt(),
            -(dd(6.0) / (dd(21.0) + r3 * 11.0)).sqrt(),
            dd(0.0),
        ),
        3 => (
            -(dd(1.0) / (dd(6.0) + r13)).sqrt(),
            ((dd(523.0) + r13 * 139.0) / 138.0).sqrt(),
            -((dd(79.0) - r13 * 17.0) / 138.0).sqrt(),
            ((dd(14.0) + r13 * 2.0) / 3.0).sqrt(),
        ),
        _ => {
            return Err(GeomError::domain(format!(
                "flat quadruplet index must be 1, 2 or 3, got {which}"
            )))
        }
    };
    Ok(FlatFamilyParams {
        epsilon: 1.0,
        lambda: l.hi(),
        a: a.hi(),
        c: c.hi(),
        d: d.hi(),
    })
}

/// The flat immersion built from quadruplet `which`.
pub fn build_fixed_flat(which: u8) -> Result<ExponentialImmersion> {
    Ok(build_flat(&fixed_quadruplet(which)?)?.with_label(format!("thm2-flat-{which}")))
}

/// Flat parameters of the explicit example over `S^7(1)`.
pub fn corollary_flat_params() -> FlatFamilyParams {
    FlatFamilyParams {
        epsilon: 1.0,
        lambda: -1.0 / 5f64.sqrt(),
        a: 3.0 * 3f64.sqrt() / 10f64.sqrt(),
        c: -(3f64.sqrt()) / 10f64.sqrt(),
        d: 2f64.sqrt(),
    }
}

/// The explicit flat example over `S^7(1)`.
pub fn corollary_flat() -> ExponentialImmersion {
    build_flat(&corollary_flat_params())
        .expect("explicit flat example is admissible")
        .with_label("corollary-flat")
}

/// The explicit non-flat example over `S^7(1)` (`μ = 1`), in the sign
/// convention of the general non-flat family.
pub fn corollary_nonflat() -> ExponentialImmersion {
    build_nonflat(&NonFlatFamilyParams {
        epsilon: 1.0,
        mu: 1.0,
    })
    .expect("μ = 1 is admissible")
    .with_label("corollary-nonflat")
}

/// Non-flat immersion over `S^7(1)` with `μ² = (4 ± √13)/3`.
pub fn fixed_nonflat(plus: bool) -> ExponentialImmersion {
    let r13 = dd(13.0).sqrt();
    let mu2 = if plus { dd(4.0) + r13 } else { dd(4.0) - r13 } / 3.0;
    build_nonflat(&NonFlatFamilyParams {
        epsilon: 1.0,
        mu: mu2.sqrt().hi(),
    })
    .expect("positive μ")
    .with_label(if plus {
        "thm2-nonflat-plus"
    } else {
        "thm2-nonflat-minus"
    })
}

/// Totally geodesic Legendrian `S³ = S⁷ ∩ ℝ⁴` over `S^7(1)`: a minimal fixture.
pub fn great_legendrian_sphere() -> ExponentialImmersion {
    let terms = (0..4)
        .map(|slot| ExpTerm::signed(1.0, [0.0; NVARS]).on_sphere(slot))
        .collect();
    let sphere = SphereFactor::new(3, 0).expect("S³ chart");
    ExponentialImmersion::new("great-sphere", 1.0, 3, terms, Some(sphere))
        .expect("real unit sphere")
        .with_domain(vec![(0.2, PI - 0.2), (0.2, PI - 0.2), (-PI, PI)])
        .expect("three variables")
}

/// The Legendre curve
/// `z(x) = (√(μ²/(μ²+1)) e^{-ix/μ}, √(1/(μ²+1)) e^{iμx})` in `S³(1)`.
pub fn legendre_curve(mu: f64) -> Result<ExponentialImmersion> {
    if !(mu > 0.0) {
        return Err(GeomError::domain(format!("μ must be positive, got {mu}")));
    }
    let mu2 = mu * mu;
    let terms = vec![
        ExpTerm::signed((mu2 / (mu2 + 1.0)).sqrt(), [-1.0 / mu, 0.0, 0.0]),
        ExpTerm::signed((1.0 / (mu2 + 1.0)).sqrt(), [mu, 0.0, 0.0]),
    ];
    ExponentialImmersion::new(format!("legendre-curve(mu={mu})"), 1.0, 1, terms, None)
}

/// `ε = (-9s² + 8st - 3t²)/(3s² - 8st + t²)` for integers `s, t`.
pub fn closedness_epsilon(s: i64, t: i64) -> Result<f64> {
    let (s, t) = (s as f64, t as f64);
    let den = 3.0 * s * s - 8.0 * s * t + t * t;
    if den == 0.0 {
        return Err(GeomError::domain(
            "closedness denominator 3s²-8st+t² vanishes",
        ));
    }
    Ok((-9.0 * s * s + 8.0 * s * t - 3.0 * t * t) / den)
}

/// Source immersion of a product decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductSource {
    CorollaryFlat,
    FixedFlat(u8),
}

/// `f(u, v, w) = (z₁(u), z₂(u) y(v, w))` with a Legendre curve
/// `(z₁, z₂)` in `S³(1)` and a Legendrian surface `y` in `S⁵(1)`.
#[derive(Clone, Debug)]
pub struct ProductFactors {
    pub curve: ExponentialImmersion,
    pub surface: ExponentialImmersion,
}

impl ProductFactors {
    /// Interleaved coordinates of `(z₁(u), z₂(u) y(v, w))`.
    pub fn reassemble(&self, u: [f64; NVARS]) -> Vec<f64> {
        let z = self.curve.complex_value([u[0], 0.0, 0.0]);
        let y = self.surface.complex_value([u[1], u[2], 0.0]);
        let mut out = vec![z[0].re, z[0].im];
        for yk in y {
            let p = z[1] * yk;
            out.push(p.re);
            out.push(p.im);
        }
        out
    }
}

/// Splits a flat immersion over `S^7(1)` into a curve and a surface factor.
pub fn product_decomposition(source: ProductSource) -> Result<ProductFactors> {
    let (s3, s5, s10) = (3f64.sqrt(), 5f64.sqrt(), 10f64.sqrt());
    let s2 = 2f64.sqrt();
    match source {
        ProductSource::CorollaryFlat => {
            let curve = ExponentialImmersion::new(
                "corollary-flat/curve",
                1.0,
                1,
                vec![
                    ExpTerm::signed(-1.0 / 6f64.sqrt(), [-s5, 0.0, 0.0]),
                    ExpTerm::signed(s5 / 6f64.sqrt(), [1.0 / s5, 0.0, 0.0]),
                ],
                None,
            )?;
            let surface = ExponentialImmersion::new(
                "corollary-flat/surface",
                1.0,
                2,
                vec![
                    ExpTerm::signed(1.0 / s5, [-4.0 * s3 / s10, 0.0, 0.0]),
                    ExpTerm::signed(1.0 / s5, [s3 / s10, -3.0 * s2 / 2.0, 0.0]),
                    ExpTerm::signed(s3 / s5, [s3 / s10, s2 / 2.0, 0.0]),
                ],
                None,
            )?;
            Ok(ProductFactors { curve, surface })
        }
        ProductSource::FixedFlat(k) => {
            let p = fixed_quadruplet(k)?;
            let (l, a, c) = (p.lambda, p.a, p.c);
            let (r1, r2) = p
                .rho()
                .ok_or_else(|| GeomError::constraint("4c(2c-a)+d²≥0"))?;
            let n = (l * l + 1.0).sqrt();
            let curve = ExponentialImmersion::new(
                format!("thm2-flat-{k}/curve"),
                1.0,
                1,
                vec![
                    ExpTerm::signed(l / n, [1.0 / l, 0.0, 0.0]),
                    ExpTerm::signed(1.0 / n, [-l, 0.0, 0.0]),
                ],
                None,
            )?;
            let surface = ExponentialImmersion::new(
                format!("thm2-flat-{k}/surface"),
                1.0,
                2,
                vec![
                    ExpTerm::signed(n / ((c - a) * (2.0 * c - a)).sqrt(), [c - a, 0.0, 0.0]),
                    ExpTerm::signed(n / (r1 * (r1 + r2)).sqrt(), [-c, -r1, 0.0]),
                    ExpTerm::signed(n / (r2 * (r1 + r2)).sqrt(), [-c, r2, 0.0]),
                ],
                None,
            )?;
            Ok(ProductFactors { curve, surface })
        }
    }
}

/// String identifiers of the shipped immersions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImmersionId {
    CorollaryFlat,
    CorollaryNonflat,
    Thm1Flat,
    Thm1Nonflat,
    Thm2Flat(u8),
    Thm2NonflatPlus,
    Thm2NonflatMinus,
    GreatSphere,
}

impl ImmersionId {
    pub const ALL: [ImmersionId; 10] = [
        ImmersionId::CorollaryFlat,
        ImmersionId::CorollaryNonflat,
        ImmersionId::Thm1Flat,
        ImmersionId::Thm1Nonflat,
        ImmersionId::Thm2Flat(1),
        ImmersionId::Thm2Flat(2),
        ImmersionId::Thm2Flat(3),
        ImmersionId::Thm2NonflatPlus,
        ImmersionId::Thm2NonflatMinus,
        ImmersionId::GreatSphere,
    ];

    /// Builds immersions that need no further parameters.
    pub fn build_fixed(self) -> Option<ExponentialImmersion> {
        match self {
            ImmersionId::CorollaryFlat => Some(corollary_flat()),
            ImmersionId::CorollaryNonflat => Some(corollary_nonflat()),
            ImmersionId::Thm2Flat(k) => build_fixed_flat(k).ok(),
            ImmersionId::Thm2NonflatPlus => Some(fixed_nonflat(true)),
            ImmersionId::Thm2NonflatMinus => Some(fixed_nonflat(false)),
            ImmersionId::GreatSphere => Some(great_legendrian_sphere()),
            ImmersionId::Thm1Flat | ImmersionId::Thm1Nonflat => None,
        }
    }
}

impl fmt::Display for ImmersionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImmersionId::CorollaryFlat => write!(f, "corollary-flat"),
            ImmersionId::CorollaryNonflat => write!(f, "corollary-nonflat"),
            ImmersionId::Thm1Flat => write!(f, "thm1-flat"),
            ImmersionId::Thm1Nonflat => write!(f, "thm1-nonflat"),
            ImmersionId::Thm2Flat(k) => write!(f, "thm2-flat-{k}"),
            ImmersionId::Thm2NonflatPlus => write!(f, "thm2-nonflat-plus"),
            ImmersionId::Thm2NonflatMinus => write!(f, "thm2-nonflat-minus"),
            ImmersionId::GreatSphere => write!(f, "great-sphere"),
        }
    }
}

impl FromStr for ImmersionId {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "corollary-flat" => ImmersionId::CorollaryFlat,
            "corollary-nonflat" => ImmersionId::CorollaryNonflat,
            "thm1-flat" => ImmersionId::Thm1Flat,
            "thm1-nonflat" => ImmersionId::Thm1Nonflat,
            "thm2-flat-1" => ImmersionId::Thm2Flat(1),
            "thm2-flat-2" => ImmersionId::Thm2Flat(2),
            "thm2-flat-3" => ImmersionId::Thm2Flat(3),
            "thm2-nonflat-plus" => ImmersionId::Thm2NonflatPlus,
            "thm2-nonflat-minus" => ImmersionId::Thm2NonflatMinus,
            "great-sphere" => ImmersionId::GreatSphere,
            other => return Err(GeomError::UnknownImmersion(other.to_string())),
        })
    }
}
