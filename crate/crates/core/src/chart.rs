//! Stereographic-chart computation of the ambient geometry.
//!
//! The sphere is parametrized by inverse stereographic projection from the
//! pole `-e_{N-1}`. The pulled-back metric is exact; Christoffel symbols and
//! the Riemann tensor come from finite differences in the chart. This is a
//! validation oracle for the closed-form connection and curvature in
//! [`crate::sasaki`] and is never used by the main pipeline.

use nalgebra::DMatrix;

use crate::finite_diff::{derivative, derivative_vec};
use crate::sasaki::{axpy, dot, SasakiStructure};

/// Step used for metric derivatives in the chart.
const CHART_STEP: f64 = 2e-3;

/// Chart coordinates `x ∈ ℝ^{N-1}` of a sphere point `p ∈ ℝ^N`.
pub fn chart_coords(p: &[f64]) -> Vec<f64> {
    let last = p[p.len() - 1];
    p[..p.len() - 1].iter().map(|c| c / (1.0 + last)).collect()
}

/// Sphere point for chart coordinates `x`.
pub fn chart_point(x: &[f64]) -> Vec<f64> {
    let r2 = dot(x, x);
    let d = 1.0 + r2;
    let mut p: Vec<f64> = x.iter().map(|c| 2.0 * c / d).collect();
    p.push((1.0 - r2) / d);
    p
}

/// Coordinate tangent vectors `∂_a σ(x)`.
pub fn chart_tangents(x: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let r2 = dot(x, x);
    let d = 1.0 + r2;
    (0..m)
        .map(|a| {
            let mut t: Vec<f64> = (0..m)
                .map(|i| {
                    let delta = if i == a { 2.0 / d } else { 0.0 };
                    delta - 4.0 * x[i] * x[a] / (d * d)
                })
                .collect();
            t.push(-4.0 * x[a] / (d * d));
            t
        })
        .collect()
}

/// Chart components of an ambient tangent vector at chart point `x`.
pub fn chart_components(x: &[f64], v: &[f64]) -> Vec<f64> {
    let r2 = dot(x, x);
    // the chart is conformal: ⟨∂_a σ, ∂_b σ⟩ = 4 δ_ab / (1 + r²)²
    let scale = (1.0 + r2).powi(2) / 4.0;
    chart_tangents(x)
        .iter()
        .map(|t| dot(t, v) * scale)
        .collect()
}

/// Riemann tensor of a [`SasakiStructure`] computed in a stereographic chart.
pub struct ChartOracle {
    structure: SasakiStructure,
}

impl ChartOracle {
    pub fn new(structure: SasakiStructure) -> Self {
        Self { structure }
    }

    /// Pulled-back metric `G_ab(x)`.
    pub fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let p = chart_point(x);
        let t = chart_tangents(x);
        let m = x.len();
        DMatrix::from_fn(m, m, |a, b| self.structure.g(&p, &t[a], &t[b]))
    }

    fn metric_derivative(&self, x: &[f64], c: usize) -> DMatrix<f64> {
        let m = x.len();
        let flat = derivative_vec(
            |s| {
                let mut y = x.to_vec();
                y[c] += s;
                self.metric(&y).as_slice().to_vec()
            },
            0.0,
            CHART_STEP,
        );
        DMatrix::from_column_slice(m, m, &flat)
    }

    /// Christoffel symbols `Γ^d_{ab}`, flattened as `[d][a][b]`.
    pub fn christoffel(&self, x: &[f64]) -> Vec<f64> {
        let m = x.len();
        let ginv = self
            .metric(x)
            .try_inverse()
            .expect("chart metric is positive definite");
        let dg: Vec<DMatrix<f64>> = (0..m).map(|c| self.metric_derivative(x, c)).collect();
        let mut gam = vec![0.0; m * m * m];
        for d in 0..m {
            for a in 0..m {
                for b in 0..m {
                    let mut s = 0.0;
                    for l in 0..m {
                        s += ginv[(d, l)] * (dg[a][(b, l)] + dg[b][(a, l)] - dg[l][(a, b)]);
                    }
                    gam[(d * m + a) * m + b] = 0.5 * s;
                }
            }
        }
        gam
    }

    /// Riemann tensor `R^d_{abc}` with `R(∂_a, ∂_b)∂_c = R^d_{abc} ∂_d`,
    /// flattened as `[d][a][b][c]`.
    pub fn riemann(&self, x: &[f64]) -> Vec<f64> {
        let m = x.len();
        let gam = self.christoffel(x);
        let dgam: Vec<Vec<f64>> = (0..m)
            .map(|e| {
                derivative_vec(
                    |s| {
                        let mut y = x.to_vec();
                        y[e] += s;
                        self.christoffel(&y)
                    },
                    0.0,
                    CHART_STEP,
                )
            })
            .collect();
        let g = |d: usize, a: usize, b: usize| gam[(d * m + a) * m + b];
        let dg = |e: usize, d: usize, a: usize, b: usize| dgam[e][(d * m + a) * m + b];
        let mut r = vec![0.0; m * m * m * m];
        for d in 0..m {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let mut v = dg(a, d, b, c) - dg(b, d, a, c);
                        for e in 0..m {
                            v += g(d, a, e) * g(e, b, c) - g(d, b, e) * g(e, a, c);
                        }
                        r[((d * m + a) * m + b) * m + c] = v;
                    }
                }
            }
        }
        r
    }

    /// `R(X, Y)Z` at sphere point `p` for ambient tangent vectors, computed
    /// through the chart and mapped back to ambient coordinates.
    pub fn curvature(&self, p: &[f64], x: &[f64], y: &[f64], z: &[f64]) -> Vec<f64> {
        let q = chart_coords(p);
        let m = q.len();
        let (xa, ya, za) = (
            chart_components(&q, x),
            chart_components(&q, y),
            chart_components(&q, z),
        );
        let r = self.riemann(&q);
        let tangents = chart_tangents(&q);
        let mut out = vec![0.0; p.len()];
        for d in 0..m {
            let mut coef = 0.0;
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        coef += r[((d * m + a) * m + b) * m + c] * xa[a] * ya[b] * za[c];
                    }
                }
            }
            axpy(&mut out, coef, &tangents[d]);
        }
        out
    }

    /// `dη(∂_a, ∂_b) = ½(∂_a η(∂_b) - ∂_b η(∂_a))` on chart coordinate
    /// fields (which commute), by finite differences.
    pub fn d_eta(&self, x: &[f64], a: usize, b: usize) -> f64 {
        let eta_along = |field: usize, dir: usize| {
            derivative(
                |s| {
                    let mut y = x.to_vec();
                    y[dir] += s;
                    let p = chart_point(&y);
                    self.structure.eta(&p, &chart_tangents(&y)[field])
                },
                0.0,
                CHART_STEP,
            )
        };
        0.5 * (eta_along(b, a) - eta_along(a, b))
    }
}
