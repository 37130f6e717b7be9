//! Truncated multivariate Taylor polynomials ("jets") in three variables.
//!
//! A [`Jet`] stores the Taylor coefficients of a smooth function of
//! `(u, v, w)` around a base point, up to total degree [`MAX_ORDER`].
//! Arithmetic on jets is exact up to that degree, so feeding the jet of an
//! immersion through metric, connection and curvature formulas yields exact
//! higher derivatives of every derived quantity without finite differences.
//!
//! Differentiating a jet lowers the number of trustworthy degrees by one.
//! Callers are responsible for only reading coefficients that are still
//! valid; the top-degree slots after [`Jet::diff`] are simply zero.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::LazyLock;

/// Number of independent variables.
pub const NVARS: usize = 3;
/// Highest total degree kept.
pub const MAX_ORDER: usize = 4;
/// Number of monomials of degree `<= MAX_ORDER` in `NVARS` variables.
pub const NCOEF: usize = 35;

struct Tables {
    exps: [[u8; NVARS]; NCOEF],
    degree: [u8; NCOEF],
    index: [[[u8; MAX_ORDER + 1]; MAX_ORDER + 1]; MAX_ORDER + 1],
    /// `(a, b, a*b)` for every pair whose product stays within degree.
    products: Vec<(u8, u8, u8)>,
    /// For each variable, `(source, target, factor)` triples of the derivative map.
    derivs: [Vec<(u8, u8, f64)>; NVARS],
}

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let mut exps = [[0u8; NVARS]; NCOEF];
    let mut degree = [0u8; NCOEF];
    let mut index = [[[u8::MAX; MAX_ORDER + 1]; MAX_ORDER + 1]; MAX_ORDER + 1];
    let mut k = 0;
    for d in 0..=MAX_ORDER {
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                let l = d - i - j;
                exps[k] = [i as u8, j as u8, l as u8];
                degree[k] = d as u8;
                index[i][j][l] = k as u8;
                k += 1;
            }
        }
    }
    debug_assert_eq!(k, NCOEF);
    let mut products = Vec::new();
    for a in 0..NCOEF {
        for b in 0..NCOEF {
            if degree[a] as usize + degree[b] as usize <= MAX_ORDER {
                let e = [
                    (exps[a][0] + exps[b][0]) as usize,
                    (exps[a][1] + exps[b][1]) as usize,
                    (exps[a][2] + exps[b][2]) as usize,
                ];
                products.push((a as u8, b as u8, index[e[0]][e[1]][e[2]]));
            }
        }
    }
    let derivs = std::array::from_fn(|var| {
        let mut out = Vec::new();
        for (src, e) in exps.iter().enumerate() {
            if e[var] > 0 {
                let mut t = *e;
                t[var] -= 1;
                let tgt = index[t[0] as usize][t[1] as usize][t[2] as usize];
                out.push((src as u8, tgt, e[var] as f64));
            }
        }
        out
    });
    Tables {
        exps,
        degree,
        index,
        products,
        derivs,
    }
});

const FACTORIAL: [f64; MAX_ORDER + 1] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// Index of the monomial `u^i v^j w^l` in the coefficient array.
pub fn monomial_index(order: [usize; NVARS]) -> Option<usize> {
    if order.iter().sum::<usize>() > MAX_ORDER {
        return None;
    }
    Some(TABLES.index[order[0]][order[1]][order[2]] as usize)
}

/// Truncated Taylor expansion of a scalar function of three variables.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; NCOEF],
}

impl Default for Jet {
    fn default() -> Self {
        Self::zero()
    }
}

impl Jet {
    pub const fn zero() -> Self {
        Self { c: [0.0; NCOEF] }
    }

    pub fn constant(x: f64) -> Self {
        let mut j = Self::zero();
        j.c[0] = x;
        j
    }

    /// The coordinate function `x_var` expanded around `x0`.
    pub fn variable(var: usize, x0: f64) -> Self {
        assert!(var < NVARS, "jet variable out of range");
        let mut j = Self::constant(x0);
        let mut e = [0usize; NVARS];
        e[var] = 1;
        j.c[monomial_index(e).unwrap()] = 1.0;
        j
    }

    /// Value at the base point.
    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[f64; NCOEF] {
        &self.c
    }

    /// Partial derivative `∂^order` at the base point.
    pub fn partial(&self, order: [usize; NVARS]) -> Option<f64> {
        let idx = monomial_index(order)?;
        let scale: f64 = order.iter().map(|&k| FACTORIAL[k]).product();
        Some(self.c[idx] * scale)
    }

    /// First partial derivative at the base point.
    #[inline]
    pub fn d1(&self, var: usize) -> f64 {
        self.c[1 + var]
    }

    /// Partial derivative as a jet (loses one degree of validity).
    pub fn diff(&self, var: usize) -> Jet {
        let mut out = Jet::zero();
        for &(src, tgt, f) in &TABLES.derivs[var] {
            out.c[tgt as usize] = self.c[src as usize] * f;
        }
        out
    }

    /// Applies a univariate function given its derivatives at the base value,
    /// `derivs[k] = g^{(k)}(self.value())`.
    pub fn compose(&self, derivs: [f64; MAX_ORDER + 1]) -> Jet {
        let mut nil = *self;
        nil.c[0] = 0.0;
        let mut out = Jet::constant(derivs[0]);
        let mut power = Jet::constant(1.0);
        for k in 1..=MAX_ORDER {
            power = power * nil;
            out += power * (derivs[k] / FACTORIAL[k]);
        }
        out
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c, s])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s, c])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose([e; MAX_ORDER + 1])
    }

    pub fn recip(&self) -> Jet {
        let x = self.value();
        let r = 1.0 / x;
        self.compose([
            r,
            -r * r,
            2.0 * r.powi(3),
            -6.0 * r.powi(4),
            24.0 * r.powi(5),
        ])
    }

    pub fn sqrt(&self) -> Jet {
        let x = self.value();
        let s = x.sqrt();
        self.compose([
            s,
            0.5 / s,
            -0.25 / (x * s),
            0.375 / (x * x * s),
            -0.9375 / (x * x * x * s),
        ])
    }

    /// Largest absolute coefficient among monomials of degree `<= order`.
    pub fn max_abs_upto(&self, order: usize) -> f64 {
        self.c
            .iter()
            .zip(TABLES.degree.iter())
            .filter(|(_, &d)| d as usize <= order)
            .fold(0.0, |m, (x, _)| m.max(x.abs()))
    }

    /// Exponents of the monomial stored at `idx`.
    pub fn exponents(idx: usize) -> [usize; NVARS] {
        let e = TABLES.exps[idx];
        [e[0] as usize, e[1] as usize, e[2] as usize]
    }
}

impl Add for Jet {
    type Output = Jet;
    #[inline]
    fn add(mut self, rhs: Jet) -> Jet {
        self += rhs;
        self
    }
}

impl AddAssign for Jet {
    #[inline]
    fn add_assign(&mut self, rhs: Jet) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
    }
}

impl Sub for Jet {
    type Output = Jet;
    #[inline]
    fn sub(mut self, rhs: Jet) -> Jet {
        self -= rhs;
        self
    }
}

impl SubAssign for Jet {
    #[inline]
    fn sub_assign(&mut self, rhs: Jet) {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
    }
}

impl Neg for Jet {
    type Output = Jet;
    #[inline]
    fn neg(mut self) -> Jet {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    #[inline]
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = Jet::zero();
        for &(a, b, t) in &TABLES.products {
            out.c[t as usize] += self.c[a as usize] * rhs.c[b as usize];
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    #[inline]
    fn mul(mut self, rhs: f64) -> Jet {
        for a in self.c.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl Div for Jet {
    type Output = Jet;
    #[inline]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

/// Scalar ring shared by plain floats and jets, so tensor formulas are
/// written once and evaluated either pointwise or with full derivatives.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn from_f64(x: f64) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn base(&self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn base(&self) -> f64 {
        *self
    }
}

impl Scalar for Jet {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Jet::constant(x)
    }
    #[inline]
    fn base(&self) -> f64 {
        self.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point_jet(f: impl Fn(&[Jet; 3]) -> Jet, x: [f64; 3]) -> Jet {
        let vars = [
            Jet::variable(0, x[0]),
            Jet::variable(1, x[1]),
            Jet::variable(2, x[2]),
        ];
        f(&vars)
    }

    #[test]
    fn table_sizes() {
        assert_eq!(monomial_index([0, 0, 0]), Some(0));
        assert_eq!(monomial_index([1, 0, 0]), Some(1));
        assert_eq!(monomial_index([0, 1, 0]), Some(2));
        assert_eq!(monomial_index([0, 0, 1]), Some(3));
        assert_eq!(monomial_index([0, 0, 4]), Some(NCOEF - 1));
        assert_eq!(monomial_index([2, 2, 1]), None);
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        // p = u^2 v + 3 v w^3
        let p = point_jet(
            |x| x[0] * x[0] * x[1] + x[1] * x[2] * x[2] * x[2] * 3.0,
            [0.7, -1.3, 0.4],
        );
        let (u, v, w) = (0.7f64, -1.3f64, 0.4f64);
        assert!((p.value() - (u * u * v + 3.0 * v * w.powi(3))).abs() < 1e-14);
        assert!((p.partial([1, 1, 0]).unwrap() - 2.0 * u).abs() < 1e-14);
        assert!((p.partial([0, 1, 3]).unwrap() - 18.0).abs() < 1e-13);
        assert!((p.partial([0, 0, 2]).unwrap() - 18.0 * v * w).abs() < 1e-13);
        assert!((p.diff(2).d1(2) - 18.0 * v * w).abs() < 1e-13);
    }

    #[test]
    fn transcendental_compositions() {
        let x = [0.3, 0.2, -0.5];
        let s = point_jet(|v| (v[0] * 2.0 + v[2]).sin(), x);
        let t = 2.0 * x[0] + x[2];
        // ∂u^3 ∂w of sin(2u + w) = 8 * sin^{(4)} = 8 sin t
        assert!((s.partial([3, 0, 1]).unwrap() - 8.0 * t.sin()).abs() < 1e-12);
        let r = point_jet(|v| (v[0] * v[0] + Jet::constant(1.0)).sqrt().recip(), x);
        // d/du (1+u^2)^{-1/2} = -u (1+u^2)^{-3/2}
        let expect = -x[0] * (1.0 + x[0] * x[0]).powf(-1.5);
        assert!((r.d1(0) - expect).abs() < 1e-14);
        let e = point_jet(|v| v[1].exp() * v[1].cos(), x);
        // (e^v cos v)'' = -2 e^v sin v
        assert!((e.partial([0, 2, 0]).unwrap() + 2.0 * x[1].exp() * x[1].sin()).abs() < 1e-13);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = [0.1, 0.9, 1.4];
        let a = point_jet(|v| v[0].cos() + v[1] * v[2] + Jet::constant(2.0), x);
        let b = point_jet(|v| v[2].sin() * v[0] + Jet::constant(3.0), x);
        let back = (a * b) / b;
        for (p, q) in back.coeffs().iter().zip(a.coeffs()) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}
