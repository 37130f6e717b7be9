//! The deformed Sasakian sphere `S^{2n+1}(ε) ⊂ ℂ^{n+1}`.
//!
//! Points of `ℂ^{n+1}` are stored as interleaved real coordinates
//! `(Re z_0, Im z_0, Re z_1, Im z_1, ...)` and `J` (multiplication by `i`)
//! acts as `(x, y) ↦ (-y, x)` on each pair.
//!
//! The round structure is `ξ₀ = -Jz`, `η₀ = ⟨ξ₀, ·⟩`, `φ₀ = tan ∘ J`. The
//! deformed structure is `η = αη₀`, `ξ = ξ₀/α`, `φ = φ₀` and
//! `g = α g₀ + α(α-1) η₀⊗η₀` with `α = 4/(ε+3)`.
//!
//! Every tensor formula is generic over [`Scalar`] so the same code runs on
//! plain floats and on jets.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::finite_diff;
use crate::jet::Scalar;

/// Tolerance on `|‖p‖ - 1|` for a point to lie on the unit sphere.
pub const ON_SPHERE_TOL: f64 = 1e-12;
/// Tolerance on `|⟨X, p⟩|` for a vector to be tangent.
pub const TANGENCY_TOL: f64 = 1e-10;

#[inline]
pub fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    let mut acc = T::zero();
    for (a, b) in x.iter().zip(y) {
        acc += *a * *b;
    }
    acc
}

/// Multiplication by `i` in interleaved coordinates.
pub fn apply_j<T: Scalar>(x: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(x.len());
    for pair in x.chunks_exact(2) {
        out.push(-pair[1]);
        out.push(pair[0]);
    }
    out
}

/// Round contact form `η₀(X) = ⟨-Jz, X⟩`.
#[inline]
pub fn eta0<T: Scalar>(z: &[T], x: &[T]) -> T {
    let mut acc = T::zero();
    for (zp, xp) in z.chunks_exact(2).zip(x.chunks_exact(2)) {
        // -Jz = (y, -x) for z = (x, y)
        acc += zp[1] * xp[0] - zp[0] * xp[1];
    }
    acc
}

/// `φ₀X = JX - η₀(X) z`, the tangential part of `JX` for tangent `X`.
pub fn phi0<T: Scalar>(z: &[T], x: &[T]) -> Vec<T> {
    let e = eta0(z, x);
    let mut out = apply_j(x);
    for (o, zi) in out.iter_mut().zip(z) {
        *o -= e * *zi;
    }
    out
}

pub(crate) fn axpy<T: Scalar>(acc: &mut [T], a: T, x: &[T]) {
    for (o, xi) in acc.iter_mut().zip(x) {
        *o += a * *xi;
    }
}

/// Curvature coefficients of the space form, `β = (ε+3)/4`, `γ = (ε-1)/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParams {
    pub beta: f64,
    pub gamma: f64,
}

/// The contact metric structure `(ε, α, φ, ξ, η, g)` on `S^{2n+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SasakiStructure {
    n: usize,
    epsilon: f64,
    alpha: f64,
}

impl SasakiStructure {
    pub fn new(n: usize, epsilon: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(GeomError::domain(format!("n must be 1, 2 or 3, got {n}")));
        }
        if !(epsilon > -3.0) || !epsilon.is_finite() {
            return Err(GeomError::domain(format!(
                "φ-sectional curvature must exceed -3, got {epsilon}"
            )));
        }
        Ok(Self {
            n,
            epsilon,
            alpha: 4.0 / (epsilon + 3.0),
        })
    }

    pub fn from_alpha(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(GeomError::domain(format!(
                "α must be positive, got {alpha}"
            )));
        }
        let mut s = Self::new(n, 4.0 / alpha - 3.0)?;
        s.alpha = alpha;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Real dimension of the ambient `ℂ^{n+1}`.
    pub fn real_dim(&self) -> usize {
        2 * (self.n + 1)
    }

    pub fn curvature_params(&self) -> CurvatureParams {
        CurvatureParams {
            beta: (self.epsilon + 3.0) / 4.0,
            gamma: (self.epsilon - 1.0) / 4.0,
        }
    }

    // ---- generic tensor kernels -------------------------------------------------

    /// `g(X, Y)` at `z`.
    pub fn g<T: Scalar>(&self, z: &[T], x: &[T], y: &[T]) -> T {
        let a = self.alpha;
        dot(x, y) * a + eta0(z, x) * eta0(z, y) * (a * (a - 1.0))
    }

    pub fn eta<T: Scalar>(&self, z: &[T], x: &[T]) -> T {
        eta0(z, x) * self.alpha
    }

    pub fn xi<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        let s = 1.0 / self.alpha;
        z.chunks_exact(2)
            .flat_map(|p| [p[1] * s, -p[0] * s])
            .collect()
    }

    pub fn phi<T: Scalar>(&self, z: &[T], x: &[T]) -> Vec<T> {
        phi0(z, x)
    }

    /// Difference tensor between the deformed and round Levi-Civita
    /// connections: `-(α-1)(η₀(X)φY + η₀(Y)φX)`.
    pub fn difference<T: Scalar>(&self, z: &[T], x: &[T], y: &[T]) -> Vec<T> {
        let k = -(self.alpha - 1.0);
        let ex = eta0(z, x) * k;
        let ey = eta0(z, y) * k;
        let px = phi0(z, x);
        let py = phi0(z, y);
        py.iter()
            .zip(px.iter())
            .map(|(a, b)| ex * *a + ey * *b)
            .collect()
    }

    /// `∇̃_X Y` for a field `Y` tangent along a curve through `z` with
    /// velocity `X`, given the Euclidean derivative `dY` of `Y` along it.
    pub fn covariant<T: Scalar>(&self, z: &[T], x: &[T], y: &[T], dy: &[T]) -> Vec<T> {
        let xy = dot(x, y);
        let mut out = self.difference(z, x, y);
        for ((o, d), zi) in out.iter_mut().zip(dy).zip(z) {
            *o += *d + xy * *zi;
        }
        out
    }

    /// Closed-form curvature `R(X, Y)Z` of the Sasakian space form.
    pub fn curvature_at<T: Scalar>(&self, z: &[T], x: &[T], y: &[T], w: &[T]) -> Vec<T> {
        let CurvatureParams { beta, gamma } = self.curvature_params();
        let gyw = self.g(z, y, w);
        let gxw = self.g(z, x, w);
        let mut out = vec![T::zero(); x.len()];
        axpy(&mut out, gyw * beta, x);
        axpy(&mut out, -(gxw * beta), y);
        if gamma != 0.0 {
            let (ex, ey, ew) = (self.eta(z, x), self.eta(z, y), self.eta(z, w));
            let xi = self.xi(z);
            let (px, py, pw) = (self.phi(z, x), self.phi(z, y), self.phi(z, w));
            axpy(&mut out, ex * ew * gamma, y);
            axpy(&mut out, -(ey * ew * gamma), x);
            axpy(&mut out, (gxw * ey - gyw * ex) * gamma, &xi);
            axpy(&mut out, self.g(z, &py, w) * gamma, &px);
            axpy(&mut out, -(self.g(z, &px, w) * gamma), &py);
            axpy(&mut out, -(self.g(z, &px, y) * (2.0 * gamma)), &pw);
        }
        out
    }

    // ---- typed API ---------------------------------------------------------------

    fn check_point(&self, p: &AmbientPoint) -> Result<()> {
        if p.coords.len() != self.real_dim() {
            return Err(GeomError::domain(format!(
                "point has {} coordinates, structure expects {}",
                p.coords.len(),
                self.real_dim()
            )));
        }
        Ok(())
    }

    fn check_vector(&self, p: &AmbientPoint, v: &AmbientVector) -> Result<()> {
        self.check_point(p)?;
        if v.base != *p {
            return Err(GeomError::domain("vector is based at a different point"));
        }
        Ok(())
    }

    /// `(ξ, η, φ)` at `p`.
    pub fn structure_tensors<'a>(&'a self, p: &'a AmbientPoint) -> Result<StructureTensors<'a>> {
        self.check_point(p)?;
        let xi = AmbientVector {
            base: p.clone(),
            comps: self.xi(&p.coords),
        };
        Ok(StructureTensors {
            structure: self,
            point: p,
            xi,
        })
    }

    pub fn metric(&self, p: &AmbientPoint, x: &AmbientVector, y: &AmbientVector) -> Result<f64> {
        self.check_vector(p, x)?;
        self.check_vector(p, y)?;
        Ok(self.g(&p.coords, &x.comps, &y.comps))
    }

    /// Levi-Civita connection `∇̃_X Y` where `dy` is the Euclidean derivative
    /// of the field `Y` along a curve through `p` with velocity `X`.
    pub fn ambient_connection(
        &self,
        p: &AmbientPoint,
        x: &AmbientVector,
        y: &AmbientVector,
        dy: &[f64],
    ) -> Result<AmbientVector> {
        self.check_vector(p, x)?;
        self.check_vector(p, y)?;
        if dy.len() != p.coords.len() {
            return Err(GeomError::domain("field derivative has wrong length"));
        }
        Ok(AmbientVector {
            base: p.clone(),
            comps: self.covariant(&p.coords, &x.comps, &y.comps, dy),
        })
    }

    /// `∇̃_{γ'(0)} Y` for a curve `γ` and a field `Y` along it, both given as
    /// closures of the curve parameter; derivatives by finite differences.
    pub fn connection_along(
        &self,
        curve: impl Fn(f64) -> Vec<f64>,
        field: impl Fn(f64) -> Vec<f64>,
    ) -> Result<AmbientVector> {
        let p = AmbientPoint::new(curve(0.0))?;
        let x = AmbientVector::new(
            &p,
            finite_diff::derivative_vec(&curve, 0.0, finite_diff::DEFAULT_STEP),
        )?;
        let y = AmbientVector::new(&p, field(0.0))?;
        let dy = finite_diff::derivative_vec(&field, 0.0, finite_diff::DEFAULT_STEP);
        self.ambient_connection(&p, &x, &y, &dy)
    }

    pub fn curvature(
        &self,
        p: &AmbientPoint,
        x: &AmbientVector,
        y: &AmbientVector,
        w: &AmbientVector,
    ) -> Result<AmbientVector> {
        for v in [x, y, w] {
            self.check_vector(p, v)?;
        }
        Ok(AmbientVector {
            base: p.clone(),
            comps: self.curvature_at(&p.coords, &x.comps, &y.comps, &w.comps),
        })
    }
}

/// A point of the unit sphere in interleaved real coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientPoint {
    coords: Vec<f64>,
}

impl AmbientPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() % 2 != 0 || coords.is_empty() {
            return Err(GeomError::domain("coordinates must come in (Re, Im) pairs"));
        }
        let norm = dot(&coords, &coords).sqrt();
        if (norm - 1.0).abs() > ON_SPHERE_TOL {
            return Err(GeomError::domain(format!(
                "point is off the unit sphere (norm {norm})"
            )));
        }
        Ok(Self { coords })
    }

    /// Normalizes `coords` onto the sphere.
    pub fn normalized(mut coords: Vec<f64>) -> Result<Self> {
        let norm = dot(&coords, &coords).sqrt();
        if !(norm > 0.0) {
            return Err(GeomError::domain("cannot normalize the zero vector"));
        }
        coords.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A tangent vector to the sphere at `base`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientVector {
    base: AmbientPoint,
    comps: Vec<f64>,
}

impl AmbientVector {
    pub fn new(base: &AmbientPoint, comps: Vec<f64>) -> Result<Self> {
        if comps.len() != base.coords.len() {
            return Err(GeomError::domain("vector and point dimensions differ"));
        }
        let radial = dot(&comps, &base.coords);
        let scale = dot(&comps, &comps).sqrt().max(1.0);
        if radial.abs() > TANGENCY_TOL * scale {
            return Err(GeomError::domain(format!(
                "vector is not tangent to the sphere (radial part {radial:e})"
            )));
        }
        Ok(Self {
            base: base.clone(),
            comps,
        })
    }

    /// Orthogonal projection of an arbitrary vector onto `T_p S`.
    pub fn project(base: &AmbientPoint, mut comps: Vec<f64>) -> Self {
        let r = dot(&comps, &base.coords);
        axpy(&mut comps, -r, &base.coords);
        Self {
            base: base.clone(),
            comps,
        }
    }

    pub fn base(&self) -> &AmbientPoint {
        &self.base
    }

    pub fn comps(&self) -> &[f64] {
        &self.comps
    }
}

/// `(ξ, η, φ)` evaluated at a fixed point.
pub struct StructureTensors<'a> {
    structure: &'a SasakiStructure,
    point: &'a AmbientPoint,
    xi: AmbientVector,
}

impl StructureTensors<'_> {
    pub fn xi(&self) -> &AmbientVector {
        &self.xi
    }

    /// Round Reeb field `ξ₀ = -Jz`.
    pub fn xi0(&self) -> Vec<f64> {
        let z = apply_j(&self.point.coords);
        z.into_iter().map(|c| -c).collect()
    }

    pub fn eta(&self, x: &AmbientVector) -> f64 {
        self.structure.eta(&self.point.coords, &x.comps)
    }

    pub fn phi(&self, x: &AmbientVector) -> AmbientVector {
        AmbientVector {
            base: self.point.clone(),
            comps: self.structure.phi(&self.point.coords, &x.comps),
        }
    }
}
