//! Extrinsic and intrinsic geometry of an immersion at a sample point.
//!
//! All quantities are assembled from jets of the immersion, so derivatives
//! of the metric, Christoffel symbols and second fundamental form are exact
//! polynomial manipulations rather than finite differences.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cubic::{normalize, CubicForm};
use crate::error::{GeomError, Result};
use crate::immersion::ExponentialImmersion;
use crate::jet::{Jet, NVARS};
use crate::sasaki::SasakiStructure;

/// Gram–Schmidt norm below which the differential counts as rank deficient.
const RANK_TOL: f64 = 1e-8;

fn scaled<T: crate::jet::Scalar>(v: &[T], s: T) -> Vec<T> {
    v.iter().map(|x| *x * s).collect()
}

fn add_scaled<T: crate::jet::Scalar>(acc: &mut [T], s: T, v: &[T]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * *x;
    }
}

fn values(v: &[Jet]) -> Vec<f64> {
    v.iter().map(|j| j.value()).collect()
}

fn diff_vec(v: &[Jet], var: usize) -> Vec<Jet> {
    v.iter().map(|j| j.diff(var)).collect()
}

/// Inverse of a symmetric `m × m` jet matrix, `m ≤ 3`, via the adjugate.
fn inverse_jet(g: &[Vec<Jet>]) -> Vec<Vec<Jet>> {
    match g.len() {
        1 => vec![vec![g[0][0].recip()]],
        2 => {
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let r = det.recip();
            vec![
                vec![g[1][1] * r, -(g[0][1] * r)],
                vec![-(g[1][0] * r), g[0][0] * r],
            ]
        }
        _ => {
            let c = |i: usize, j: usize| {
                let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
                let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
                g[i1][j1] * g[i2][j2] - g[i1][j2] * g[i2][j1]
            };
            let det = g[0][0] * c(0, 0) + g[0][1] * c(0, 1) + g[0][2] * c(0, 2);
            let r = det.recip();
            (0..3)
                .map(|i| (0..3).map(|j| c(j, i) * r).collect())
                .collect()
        }
    }
}

/// Orthonormal tangent frame and the Legendrian normal frame at a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameData {
    pub point: [f64; NVARS],
    pub position: Vec<f64>,
    /// `e_a`, orthonormal for the deformed metric.
    pub tangent: Vec<Vec<f64>>,
    /// `φe_a`.
    pub normal_phi: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
    /// `e_a = Σ_i coeffs[a][i] ∂_i f`.
    pub coeffs: Vec<Vec<f64>>,
}

/// Second fundamental form in the orthonormal frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FundamentalForms {
    /// Coordinate metric `g_ij`.
    pub metric: Vec<Vec<f64>>,
    /// `h_abc = g(h(e_a, e_b), φe_c)`.
    pub hphi: CubicForm,
    /// `g(h(e_a, e_b), ξ)`.
    pub hxi: Vec<Vec<f64>>,
    /// Mean curvature vector `H = (1/m) tr h`.
    pub mean_curvature: Vec<f64>,
    /// `g(H, H)^{1/2}`.
    pub mean_curvature_norm: f64,
    pub frame: FrameData,
}

/// `∇̄h` in the orthonormal frame, resolved along `φe_l` and `ξ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NablaH {
    /// `phi[a][b][c][l] = g((∇̄_{e_a} h)(e_b, e_c), φe_l)`.
    pub phi: Vec<Vec<Vec<Vec<f64>>>>,
    /// `xi[a][b][c] = g((∇̄_{e_a} h)(e_b, e_c), ξ)`.
    pub xi: Vec<Vec<Vec<f64>>>,
}

/// Every pointwise quantity the checks need, computed once per sample.
#[derive(Clone, Debug)]
pub struct PointGeometry {
    structure: SasakiStructure,
    u: [f64; NVARS],
    m: usize,
    position: Vec<f64>,
    tangents: Vec<Vec<f64>>,
    metric: Vec<Vec<f64>>,
    metric_inv: Vec<Vec<f64>>,
    /// `Γ^k_ij` as `[k][i][j]`.
    christoffel: Vec<Vec<Vec<f64>>>,
    /// Coordinate second fundamental form `h(∂_i, ∂_j)`.
    h: Vec<Vec<Vec<f64>>>,
    /// `(∇̄_{∂_k} h)(∂_i, ∂_j)` as `[k][i][j]`.
    nabla_h: Vec<Vec<Vec<Vec<f64>>>>,
    /// `g(A_{φ∂_k} ∂_i, ∂_j)` from the Weingarten formula.
    weingarten: Vec<Vec<Vec<f64>>>,
    /// `g(R(∂_i, ∂_j)∂_k, ∂_l)` of the induced metric.
    riemann: Vec<Vec<Vec<Vec<f64>>>>,
    tension: Vec<f64>,
    bitension: Vec<f64>,
    frame: FrameData,
}

impl PointGeometry {
    pub fn new(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<Self> {
        let s = imm.structure();
        let m = imm.domain_dim();
        let fj = imm.jets(u);
        let fv = values(&fj);
        let tj: Vec<Vec<Jet>> = (0..m).map(|i| diff_vec(&fj, i)).collect();
        let tv: Vec<Vec<f64>> = tj.iter().map(|t| values(t)).collect();

        let gj: Vec<Vec<Jet>> = (0..m)
            .map(|i| (0..m).map(|j| s.g(&fj, &tj[i], &tj[j])).collect())
            .collect();
        let metric: Vec<Vec<f64>> = gj.iter().map(|r| values(r)).collect();
        let coeffs = gram_schmidt(&metric).ok_or_else(|| GeomError::Degenerate {
            point: u,
            reason: "coordinate tangents are linearly dependent".into(),
        })?;
        let ginvj = inverse_jet(&gj);
        let metric_inv: Vec<Vec<f64>> = ginvj.iter().map(|r| values(r)).collect();

        // Γ^k_ij = ½ g^{kl}(∂_i g_jl + ∂_j g_il - ∂_l g_ij)
        let dg: Vec<Vec<Vec<Jet>>> = (0..m)
            .map(|c| {
                (0..m)
                    .map(|i| (0..m).map(|j| gj[i][j].diff(c)).collect())
                    .collect()
            })
            .collect();
        let gamj: Vec<Vec<Vec<Jet>>> = (0..m)
            .map(|k| {
                (0..m)
                    .map(|i| {
                        (0..m)
                            .map(|j| {
                                let mut acc = Jet::zero();
                                for l in 0..m {
                                    acc += ginvj[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                                }
                                acc * 0.5
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let christoffel: Vec<Vec<Vec<f64>>> = gamj
            .iter()
            .map(|a| a.iter().map(|b| values(b)).collect())
            .collect();

        // h(∂_i, ∂_j) = ∇̃_{∂_i} ∂_j f - Γ^k_ij ∂_k f
        let mut hj: Vec<Vec<Vec<Jet>>> = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in i..m {
                let mut v = s.covariant(&fj, &tj[i], &tj[j], &diff_vec(&tj[j], i));
                for k in 0..m {
                    add_scaled(&mut v, -gamj[k][i][j], &tj[k]);
                }
                hj[j][i] = v.clone();
                hj[i][j] = v;
            }
        }
        let h: Vec<Vec<Vec<f64>>> = hj
            .iter()
            .map(|r| r.iter().map(|v| values(v)).collect())
            .collect();

        let dim = fv.len();
        let mut tauj = vec![Jet::zero(); dim];
        for i in 0..m {
            for j in 0..m {
                add_scaled(&mut tauj, ginvj[i][j], &hj[i][j]);
            }
        }
        let tension = values(&tauj);

        // ∇^f_{∂_i} τ as jets, then one more covariant derivative pointwise
        let ntau: Vec<Vec<Jet>> = (0..m)
            .map(|i| s.covariant(&fj, &tj[i], &tauj, &diff_vec(&tauj, i)))
            .collect();
        let mut bitension = vec![0.0; dim];
        for i in 0..m {
            for j in 0..m {
                let nn = s.covariant(
                    &fv,
                    &tv[i],
                    &values(&ntau[j]),
                    &values(&diff_vec(&ntau[j], i)),
                );
                add_scaled(&mut bitension, metric_inv[i][j], &nn);
                for k in 0..m {
                    add_scaled(
                        &mut bitension,
                        -metric_inv[i][j] * christoffel[k][i][j],
                        &values(&ntau[k]),
                    );
                }
                let r = s.curvature_at(&fv, &tension, &tv[i], &tv[j]);
                add_scaled(&mut bitension, metric_inv[i][j], &r);
            }
        }

        let normal_part = |v: &[f64]| -> Vec<f64> {
            let mut out = v.to_vec();
            let gv: Vec<f64> = (0..m).map(|i| s.g(&fv, v, &tv[i])).collect();
            for a in 0..m {
                for b in 0..m {
                    add_scaled(&mut out, -metric_inv[a][b] * gv[a], &tv[b]);
                }
            }
            out
        };

        let mut nabla_h = vec![vec![vec![Vec::new(); m]; m]; m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let d = s.covariant(&fv, &tv[k], &h[i][j], &values(&diff_vec(&hj[i][j], k)));
                    let mut v = normal_part(&d);
                    for l in 0..m {
                        add_scaled(&mut v, -christoffel[l][k][i], &h[l][j]);
                        add_scaled(&mut v, -christoffel[l][k][j], &h[i][l]);
                    }
                    nabla_h[k][i][j] = v;
                }
            }
        }

        let weingarten: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|k| {
                let nu = s.phi(&fj, &tj[k]);
                let nv = values(&nu);
                (0..m)
                    .map(|i| {
                        let d = s.covariant(&fv, &tv[i], &nv, &values(&diff_vec(&nu, i)));
                        (0..m).map(|j| -s.g(&fv, &d, &tv[j])).collect()
                    })
                    .collect()
            })
            .collect();

        // R^l_ijk = ∂_i Γ^l_jk - ∂_j Γ^l_ik + Γ^l_ip Γ^p_jk - Γ^l_jp Γ^p_ik
        let dgam = |e: usize, l: usize, a: usize, b: usize| gamj[l][a][b].diff(e).value();
        let mut rup = vec![vec![vec![vec![0.0; m]; m]; m]; m];
        for l in 0..m {
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        let mut v = dgam(i, l, j, k) - dgam(j, l, i, k);
                        for p in 0..m {
                            v += christoffel[l][i][p] * christoffel[p][j][k]
                                - christoffel[l][j][p] * christoffel[p][i][k];
                        }
                        rup[l][i][j][k] = v;
                    }
                }
            }
        }
        let riemann: Vec<Vec<Vec<Vec<f64>>>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        (0..m)
                            .map(|k| {
                                (0..m)
                                    .map(|l| (0..m).map(|p| metric[l][p] * rup[p][i][j][k]).sum())
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();

        let tangent: Vec<Vec<f64>> = coeffs
            .iter()
            .map(|c| {
                let mut e = vec![0.0; dim];
                for i in 0..m {
                    add_scaled(&mut e, c[i], &tv[i]);
                }
                e
            })
            .collect();
        let frame = FrameData {
            point: u,
            normal_phi: tangent.iter().map(|e| s.phi(&fv, e)).collect(),
            xi: s.xi(&fv),
            tangent,
            position: fv.clone(),
            coeffs,
        };

        Ok(Self {
            structure: s,
            u,
            m,
            position: fv,
            tangents: tv,
            metric,
            metric_inv,
            christoffel,
            h,
            nabla_h,
            weingarten,
            riemann,
            tension,
            bitension,
            frame,
        })
    }

    pub fn structure(&self) -> SasakiStructure {
        self.structure
    }

    pub fn point(&self) -> [f64; NVARS] {
        self.u
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn position(&self) -> &[f64] {
        &self.position
    }

    pub fn coordinate_tangents(&self) -> &[Vec<f64>] {
        &self.tangents
    }

    pub fn metric(&self) -> &[Vec<f64>] {
        &self.metric
    }

    pub fn metric_inv(&self) -> &[Vec<f64>] {
        &self.metric_inv
    }

    pub fn christoffel(&self) -> &[Vec<Vec<f64>>] {
        &self.christoffel
    }

    pub fn frame(&self) -> &FrameData {
        &self.frame
    }

    /// `g(X, Y)` at the sample point.
    pub fn g(&self, x: &[f64], y: &[f64]) -> f64 {
        self.structure.g(&self.position, x, y)
    }

    /// Frame-to-coordinate change of a covariant tensor slot.
    fn frame_sum<F: Fn(usize) -> Vec<f64>>(&self, a: usize, f: F) -> Vec<f64> {
        let mut out = vec![0.0; self.position.len()];
        for i in 0..self.m {
            add_scaled(&mut out, self.frame.coeffs[a][i], &f(i));
        }
        out
    }

    /// `h(e_a, e_b)` as an ambient vector.
    pub fn h_frame(&self, a: usize, b: usize) -> Vec<f64> {
        self.frame_sum(a, |i| self.frame_sum(b, |j| self.h[i][j].clone()))
    }

    pub fn fundamental_forms(&self) -> FundamentalForms {
        let m = self.m;
        let hf: Vec<Vec<Vec<f64>>> = (0..m)
            .map(|a| (0..m).map(|b| self.h_frame(a, b)).collect())
            .collect();
        let hphi = CubicForm::from_fn(m, |a, b, c| self.g(&hf[a][b], &self.frame.normal_phi[c]));
        let hxi = (0..m)
            .map(|a| (0..m).map(|b| self.g(&hf[a][b], &self.frame.xi)).collect())
            .collect();
        let mean_curvature = scaled(&self.tension, 1.0 / m as f64);
        let mean_curvature_norm = self.g(&mean_curvature, &mean_curvature).max(0.0).sqrt();
        FundamentalForms {
            metric: self.metric.clone(),
            hphi,
            hxi,
            mean_curvature,
            mean_curvature_norm,
            frame: self.frame.clone(),
        }
    }

    /// Shape operator matrices `g(A_{φe_c} e_a, e_b)` as `[c][a][b]`, from
    /// the Weingarten formula rather than from `h`.
    pub fn shape_operators(&self) -> Vec<Vec<Vec<f64>>> {
        let m = self.m;
        let e = &self.frame.coeffs;
        (0..m)
            .map(|c| {
                (0..m)
                    .map(|a| {
                        (0..m)
                            .map(|b| {
                                let mut s = 0.0;
                                for k in 0..m {
                                    for i in 0..m {
                                        for j in 0..m {
                                            s += e[c][k]
                                                * e[a][i]
                                                * e[b][j]
                                                * self.weingarten[k][i][j];
                                        }
                                    }
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn nabla_h(&self) -> NablaH {
        let m = self.m;
        let mut phi = vec![vec![vec![vec![0.0; m]; m]; m]; m];
        let mut xi = vec![vec![vec![0.0; m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let v = self.frame_sum(a, |k| {
                        self.frame_sum(b, |i| self.frame_sum(c, |j| self.nabla_h[k][i][j].clone()))
                    });
                    for l in 0..m {
                        phi[a][b][c][l] = self.g(&v, &self.frame.normal_phi[l]);
                    }
                    xi[a][b][c] = self.g(&v, &self.frame.xi);
                }
            }
        }
        NablaH { phi, xi }
    }

    /// `g(R(e_a, e_b)e_c, e_d)` of the induced metric.
    pub fn intrinsic_riemann(&self) -> Vec<Vec<Vec<Vec<f64>>>> {
        let m = self.m;
        let e = &self.frame.coeffs;
        let mut out = vec![vec![vec![vec![0.0; m]; m]; m]; m];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let mut s = 0.0;
                        for i in 0..m {
                            for j in 0..m {
                                for k in 0..m {
                                    for l in 0..m {
                                        s += e[a][i]
                                            * e[b][j]
                                            * e[c][k]
                                            * e[d][l]
                                            * self.riemann[i][j][k][l];
                                    }
                                }
                            }
                        }
                        out[a][b][c][d] = s;
                    }
                }
            }
        }
        out
    }

    /// Sectional curvature of `span{e_a, e_b}` from the induced metric.
    pub fn intrinsic_sectional(&self, a: usize, b: usize) -> f64 {
        self.intrinsic_riemann()[a][b][b][a]
    }

    /// Sectional curvature of `span{e_a, e_b}` from the Gauss equation.
    pub fn gauss_sectional(&self, a: usize, b: usize) -> f64 {
        let beta = self.structure.curvature_params().beta;
        let (haa, hbb, hab) = (self.h_frame(a, a), self.h_frame(b, b), self.h_frame(a, b));
        beta + self.g(&haa, &hbb) - self.g(&hab, &hab)
    }

    /// `τ(f) = tr h`.
    pub fn tension(&self) -> &[f64] {
        &self.tension
    }

    /// `τ₂(f)`.
    pub fn bitension(&self) -> &[f64] {
        &self.bitension
    }

    /// Component of `v` normal to the immersion.
    pub fn normal_part(&self, v: &[f64]) -> Vec<f64> {
        let mut out = v.to_vec();
        for e in &self.frame.tangent {
            add_scaled(&mut out, -self.g(v, e), e);
        }
        out
    }

    /// `g`-norm of a vector at the sample point.
    pub fn norm(&self, v: &[f64]) -> f64 {
        self.g(v, v).max(0.0).sqrt()
    }

    /// `Σ_{a,b} g(h(e_a, e_b), H) h(e_a, e_b) - 6H`.
    pub fn condition_6h(&self) -> Vec<f64> {
        let m = self.m;
        let hvec = scaled(&self.tension, 1.0 / m as f64);
        let mut out = scaled(&hvec, -6.0);
        for a in 0..m {
            for b in 0..m {
                let hab = self.h_frame(a, b);
                add_scaled(&mut out, self.g(&hab, &hvec), &hab);
            }
        }
        out
    }

    /// `|η(∂_i f)|` maximized over coordinate directions.
    pub fn legendrian_defect(&self) -> f64 {
        self.tangents
            .iter()
            .map(|t| self.structure.eta(&self.position, t).abs())
            .fold(0.0, f64::max)
    }
}

/// Gram–Schmidt coefficients for the Gram matrix `g`, with one
/// reorthogonalization pass.
fn gram_schmidt(g: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let m = g.len();
    let ip = |x: &[f64], y: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                s += x[i] * g[i][j] * y[j];
            }
        }
        s
    };
    let scale = (0..m).map(|i| g[i][i]).fold(0.0, f64::max).sqrt();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(m);
    for a in 0..m {
        let mut v = vec![0.0; m];
        v[a] = 1.0;
        for _ in 0..2 {
            for e in &out {
                let p = ip(&v, e);
                for (vi, ei) in v.iter_mut().zip(e) {
                    *vi -= p * ei;
                }
            }
        }
        let n = ip(&v, &v).max(0.0).sqrt();
        if n < RANK_TOL * scale.max(1.0) {
            return None;
        }
        out.push(v.iter().map(|x| x / n).collect());
    }
    Some(out)
}

/// Frame at a domain point.
pub fn frame_at(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<FrameData> {
    Ok(PointGeometry::new(imm, u)?.frame)
}

pub fn fundamental_forms(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<FundamentalForms> {
    Ok(PointGeometry::new(imm, u)?.fundamental_forms())
}

pub fn nabla_h(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<NablaH> {
    Ok(PointGeometry::new(imm, u)?.nabla_h())
}

pub fn gauss_sectional(
    imm: &ExponentialImmersion,
    u: [f64; NVARS],
    i: usize,
    j: usize,
) -> Result<f64> {
    if i == j {
        return Err(GeomError::domain(
            "sectional curvature needs two distinct directions",
        ));
    }
    Ok(PointGeometry::new(imm, u)?.gauss_sectional(i, j))
}

pub fn tension(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<Vec<f64>> {
    Ok(PointGeometry::new(imm, u)?.tension)
}

pub fn bitension(imm: &ExponentialImmersion, u: [f64; NVARS]) -> Result<Vec<f64>> {
    Ok(PointGeometry::new(imm, u)?.bitension)
}

/// Pointwise geometry at every sample, in sample order.
pub fn sample_geometry(
    imm: &ExponentialImmersion,
    points: &[[f64; NVARS]],
) -> Result<Vec<PointGeometry>> {
    points
        .par_iter()
        .map(|&u| PointGeometry::new(imm, u))
        .collect()
}

fn max_over(points: &[PointGeometry], f: impl Fn(&PointGeometry) -> f64 + Sync + Send) -> f64 {
    points.par_iter().map(f).reduce(
        || 0.0,
        |a, b| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.max(b)
            }
        },
    )
}

/// `max |η(∂_i f)|` over samples and coordinate directions.
pub fn check_legendrian(imm: &ExponentialImmersion, points: &[[f64; NVARS]]) -> Result<f64> {
    let s = imm.structure();
    let m = imm.domain_dim();
    Ok(points
        .iter()
        .map(|&u| {
            let fj = imm.jets(u);
            let fv = values(&fj);
            (0..m)
                .map(|i| {
                    let t: Vec<f64> = fj.iter().map(|j| j.d1(i)).collect();
                    s.eta(&fv, &t).abs()
                })
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max))
}

/// Largest norm of the `φTM` part of `(∇̄_{e_a} h)(e_b, e_c)`.
pub fn c_parallel_residual(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| {
        let nh = p.nabla_h();
        let mut worst = 0.0f64;
        for a in &nh.phi {
            for b in a {
                for c in b {
                    worst = worst.max(c.iter().map(|x| x * x).sum::<f64>().sqrt());
                }
            }
        }
        worst
    })
}

/// `max |g((∇̄_{e_a} h)(e_b, e_c), ξ) - h_bca|`.
pub fn xi_component_defect(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| {
        let nh = p.nabla_h();
        let ff = p.fundamental_forms();
        let m = p.dim();
        let mut worst = 0.0f64;
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    worst = worst.max((nh.xi[a][b][c] - ff.hphi.get(b, c, a)).abs());
                }
            }
        }
        worst
    })
}

/// `max ‖τ₂‖` over samples.
pub fn bitension_residual(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| p.norm(p.bitension()))
}

/// `max ‖(τ₂)^⊥‖` over samples.
pub fn biminimal_residual(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| p.norm(&p.normal_part(p.bitension())))
}

pub fn condition_6h_residual(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| p.norm(&p.condition_6h()))
}

/// `max |K_gauss - K_intrinsic|` over samples and frame pairs.
pub fn gauss_intrinsic_defect(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| {
        let rm = p.intrinsic_riemann();
        let m = p.dim();
        let mut worst = 0.0f64;
        for a in 0..m {
            for b in a + 1..m {
                worst = worst.max((p.gauss_sectional(a, b) - rm[a][b][b][a]).abs());
            }
        }
        worst
    })
}

/// Largest `|K_ab|` from the Gauss equation.
pub fn max_abs_sectional(geoms: &[PointGeometry]) -> f64 {
    max_over(geoms, |p| {
        let m = p.dim();
        let mut worst = 0.0f64;
        for a in 0..m {
            for b in a + 1..m {
                worst = worst.max(p.gauss_sectional(a, b).abs());
            }
        }
        worst
    })
}

/// Mean and standard deviation of `‖H‖` over samples.
pub fn mean_curvature_stats(geoms: &[PointGeometry]) -> (f64, f64) {
    let v: Vec<f64> = geoms
        .iter()
        .map(|p| p.norm(&scaled(p.tension(), 1.0 / p.dim() as f64)))
        .collect();
    let n = v.len().max(1) as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Result of an H-umbilical search.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HUmbilical {
    pub lambda: f64,
    pub mu: f64,
    /// Axis in frame coordinates.
    pub axis: Vec<f64>,
    pub residual: f64,
}

/// Deviation of `T` from the pattern `T(a,a,a) = λ`, `T(a,a,p) = 0`,
/// `T(a,p,q) = μ⟨p,q⟩`, `T(p,q,r) = 0` for `p, q, r ⟂ a`.
pub fn h_umbilical_pattern(t: &CubicForm, axis: &[f64]) -> (f64, f64, f64) {
    let m = t.dim();
    let a = normalize(axis);
    let lambda = t.eval(&a);
    let taa = t.contract2(&a, &a);
    let mut r2: f64 = taa
        .iter()
        .zip(&a)
        .map(|(x, ai)| (x - lambda * ai).powi(2))
        .sum();
    // orthonormal basis of a^⊥
    let mut perp: Vec<Vec<f64>> = Vec::new();
    for k in 0..m {
        let mut v = vec![0.0; m];
        v[k] = 1.0;
        for _ in 0..2 {
            for w in std::iter::once(&a).chain(perp.iter()) {
                let p: f64 = v.iter().zip(w).map(|(x, y)| x * y).sum();
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi -= p * wi;
                }
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.5 {
            perp.push(v.iter().map(|x| x / n).collect());
        }
    }
    let ta = t.contract1(&a);
    let q = perp.len();
    let mu = if q == 0 {
        0.0
    } else {
        (0..q)
            .map(|i| {
                let v = ta.clone() * nalgebra::DVector::from_vec(perp[i].clone());
                v.iter().zip(&perp[i]).map(|(x, y)| x * y).sum::<f64>()
            })
            .sum::<f64>()
            / q as f64
    };
    for i in 0..q {
        for j in 0..q {
            let v = ta.clone() * nalgebra::DVector::from_vec(perp[j].clone());
            let pij: f64 = v.iter().zip(&perp[i]).map(|(x, y)| x * y).sum();
            let target = if i == j { mu } else { 0.0 };
            r2 += (pij - target).powi(2);
            for k in 0..q {
                let tpq = t.contract2(&perp[i], &perp[j]);
                let val: f64 = tpq.iter().zip(&perp[k]).map(|(x, y)| x * y).sum();
                r2 += val * val;
            }
        }
    }
    (lambda, mu, r2.sqrt())
}

/// Searches for an H-umbilical axis of the cubic form. The axis is a
/// critical direction of `T(y, y, y)`, so candidates come from the Lagrange
/// system; returns the best one if its residual is below `tol`.
pub fn h_umbilical_detect_form(t: &CubicForm, tol: f64) -> Option<HUmbilical> {
    let best = t
        .critical_points(200)
        .into_iter()
        .map(|c| {
            let (lambda, mu, residual) = h_umbilical_pattern(t, &c.y);
            HUmbilical {
                lambda,
                mu,
                axis: c.y,
                residual,
            }
        })
        .min_by(|a, b| a.residual.total_cmp(&b.residual))?;
    (best.residual < tol).then_some(best)
}

pub fn h_umbilical_detect(
    imm: &ExponentialImmersion,
    u: [f64; NVARS],
    tol: f64,
) -> Result<Option<HUmbilical>> {
    let ff = fundamental_forms(imm, u)?;
    Ok(h_umbilical_detect_form(&ff.hphi, tol))
}

/// `η(∂_var f)` at a domain point.
pub fn eta_along(imm: &ExponentialImmersion, u: [f64; NVARS], var: usize) -> f64 {
    let s = imm.structure();
    let fj = imm.jets(u);
    let fv = values(&fj);
    let t: Vec<f64> = fj.iter().map(|j| j.d1(var)).collect();
    s.eta(&fv, &t)
}
