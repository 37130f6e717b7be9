//! Symmetric cubic forms on a Euclidean space of dimension `m ≤ 3` and their
//! critical points on the unit sphere.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Newton stopping tolerance on the Lagrange residual.
const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 60;
/// Two maximizers closer than this in value are ties.
const TIE_TOL: f64 = 1e-9;

/// `T(x, y, z) = Σ t_ijk x^i y^j z^k` with `t` totally symmetric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicForm {
    m: usize,
    t: Vec<f64>,
}

/// A critical point `y` of `T(y, y, y)` on the unit sphere with multiplier
/// `ν`, i.e. `3T(·, y, y) = 2νy`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub y: Vec<f64>,
    pub value: f64,
    pub multiplier: f64,
    pub residual: f64,
}

impl CubicForm {
    pub fn from_fn(m: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut t = vec![0.0; m * m * m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    t[(i * m + j) * m + k] = f(i, j, k);
                }
            }
        }
        Self { m, t }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[(i * self.m + j) * self.m + k]
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest `|t_ijk - t_σ(ijk)|` over all permutations.
    pub fn symmetry_defect(&self) -> f64 {
        let m = self.m;
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let v = self.get(i, j, k);
                    for w in [
                        self.get(i, k, j),
                        self.get(j, i, k),
                        self.get(j, k, i),
                        self.get(k, i, j),
                        self.get(k, j, i),
                    ] {
                        worst = worst.max((v - w).abs());
                    }
                }
            }
        }
        worst
    }

    /// Same form in the basis `b_a = Σ_i basis[a][i] e_i`.
    pub fn in_basis(&self, basis: &[Vec<f64>]) -> CubicForm {
        let m = self.m;
        CubicForm::from_fn(basis.len(), |a, b, c| {
            let mut s = 0.0;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        s += self.get(i, j, k) * basis[a][i] * basis[b][j] * basis[c][k];
                    }
                }
            }
            s
        })
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        let g = self.contract2(y, y);
        g.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// `T(·, x, y)`.
    pub fn contract2(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let m = self.m;
        (0..m)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..m {
                    for k in 0..m {
                        s += self.get(i, j, k) * x[j] * y[k];
                    }
                }
                s
            })
            .collect()
    }

    /// `T(·, ·, y)` as a symmetric matrix.
    pub fn contract1(&self, y: &[f64]) -> DMatrix<f64> {
        let m = self.m;
        DMatrix::from_fn(m, m, |i, j| (0..m).map(|k| self.get(i, j, k) * y[k]).sum())
    }

    /// Euclidean gradient `3T(·, y, y)`.
    pub fn gradient(&self, y: &[f64]) -> Vec<f64> {
        self.contract2(y, y).into_iter().map(|v| 3.0 * v).collect()
    }

    /// Lagrange map `(3T(·, y, y) - 2νy, |y|² - 1)`.
    pub fn lagrange_residual(&self, y: &[f64], nu: f64) -> Vec<f64> {
        let mut r: Vec<f64> = self
            .gradient(y)
            .iter()
            .zip(y)
            .map(|(g, yi)| g - 2.0 * nu * yi)
            .collect();
        r.push(y.iter().map(|v| v * v).sum::<f64>() - 1.0);
        r
    }

    /// Jacobian of [`Self::lagrange_residual`] in `(y, ν)`.
    pub fn lagrange_jacobian(&self, y: &[f64], nu: f64) -> DMatrix<f64> {
        let m = self.m;
        let t1 = self.contract1(y);
        DMatrix::from_fn(m + 1, m + 1, |i, j| match (i < m, j < m) {
            (true, true) => 6.0 * t1[(i, j)] - if i == j { 2.0 * nu } else { 0.0 },
            (true, false) => -2.0 * y[i],
            (false, true) => 2.0 * y[j],
            (false, false) => 0.0,
        })
    }

    /// Newton's method on the Lagrange system from `y0`.
    pub fn newton(&self, y0: &[f64]) -> CriticalPoint {
        let m = self.m;
        let n0 = y0.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut y: Vec<f64> = y0.iter().map(|v| v / n0).collect();
        let mut nu = 1.5 * self.eval(&y);
        let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut res = norm(&self.lagrange_residual(&y, nu));
        for _ in 0..NEWTON_MAX_ITER {
            if res < NEWTON_TOL {
                break;
            }
            let jac = self.lagrange_jacobian(&y, nu);
            let rhs = DVector::from_vec(self.lagrange_residual(&y, nu));
            let Some(step) = jac.lu().solve(&rhs) else {
                break;
            };
            let mut damping = 1.0;
            let mut improved = false;
            while damping > 1e-4 {
                let ty: Vec<f64> = (0..m).map(|i| y[i] - damping * step[i]).collect();
                let tnu = nu - damping * step[m];
                let tr = norm(&self.lagrange_residual(&ty, tnu));
                if tr < res || tr < NEWTON_TOL {
                    y = ty;
                    nu = tnu;
                    res = tr;
                    improved = true;
                    break;
                }
                damping *= 0.5;
            }
            if !improved {
                break;
            }
        }
        CriticalPoint {
            value: self.eval(&y),
            y,
            multiplier: nu,
            residual: res,
        }
    }

    /// Projected gradient ascent on the unit sphere.
    fn ascend(&self, y0: &[f64]) -> Vec<f64> {
        let mut y = y0.to_vec();
        let scale = self.norm().max(1e-300);
        let mut step = 0.5 / scale;
        let mut val = self.eval(&y);
        for _ in 0..400 {
            let g = self.gradient(&y);
            let gy: f64 = g.iter().zip(&y).map(|(a, b)| a * b).sum();
            let pg: Vec<f64> = g.iter().zip(&y).map(|(a, b)| a - gy * b).collect();
            if pg.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-10 * scale {
                break;
            }
            let cand = normalize(
                &y.iter()
                    .zip(&pg)
                    .map(|(a, b)| a + step * b)
                    .collect::<Vec<_>>(),
            );
            let cv = self.eval(&cand);
            if cv >= val {
                y = cand;
                val = cv;
                step *= 1.2;
            } else {
                step *= 0.5;
            }
        }
        y
    }

    /// Global maximizer of `T(y, y, y)` on the unit sphere by multi-start
    /// projected ascent followed by Newton polishing.
    pub fn maximize(&self, starts: usize) -> Result<CriticalPoint> {
        if self.norm() < 1e-10 {
            return Err(GeomError::Degenerate {
                point: [0.0; 3],
                reason: "cubic form vanishes (totally geodesic point)".into(),
            });
        }
        let cands: Vec<CriticalPoint> = sphere_starts(self.m, starts)
            .par_iter()
            .map(|s| self.newton(&self.ascend(s)))
            .collect();
        let best = cands.into_iter().filter(|c| c.residual < 1e-9).fold(
            None::<CriticalPoint>,
            |acc, c| match acc {
                None => Some(c),
                Some(b) => {
                    if c.value > b.value + TIE_TOL
                        || ((c.value - b.value).abs() <= TIE_TOL && lex_greater(&c.y, &b.y))
                    {
                        Some(c)
                    } else {
                        Some(b)
                    }
                }
            },
        );
        best.ok_or_else(|| GeomError::NonConvergence {
            what: "cubic form maximization".into(),
            best_residual: f64::NAN,
        })
    }

    /// All critical points reached by Newton from `starts` directions,
    /// deduplicated.
    pub fn critical_points(&self, starts: usize) -> Vec<CriticalPoint> {
        let cands: Vec<CriticalPoint> = sphere_starts(self.m, starts)
            .par_iter()
            .map(|s| self.newton(s))
            .collect();
        let mut out: Vec<CriticalPoint> = Vec::new();
        for c in cands.into_iter().filter(|c| c.residual < 1e-9) {
            let dup = out.iter().any(|o| {
                o.y.iter()
                    .zip(&c.y)
                    .map(|(a, b)| (a - b).powi(2))
                    .sum::<f64>()
                    .sqrt()
                    < 1e-7
            });
            if !dup {
                out.push(c);
            }
        }
        out
    }
}

fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > TIE_TOL {
            return x > y;
        }
    }
    false
}

pub(crate) fn normalize(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Quasi-uniform directions on the unit sphere of `ℝ^m`.
pub fn sphere_starts(m: usize, count: usize) -> Vec<Vec<f64>> {
    let count = count.max(2);
    match m {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|i| {
                let t = 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            // Fibonacci lattice
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let th = golden * i as f64;
                    vec![r * th.cos(), r * th.sin(), z]
                })
                .collect()
        }
    }
}
