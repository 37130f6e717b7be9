//! Central finite differences with one Richardson extrapolation step.
//!
//! Used only as an independent oracle against the exact jet derivatives.

/// Default step for the stencils.
pub const DEFAULT_STEP: f64 = 1e-3;

fn stencil4<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Step scaled by the coordinate magnitude.
pub fn scaled_step(x: f64, h: f64) -> f64 {
    h * x.abs().max(1.0)
}

/// First derivative by a 4th-order central stencil refined with Richardson
/// extrapolation (6th order overall).
pub fn derivative<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let h = scaled_step(x, h);
    let d1 = stencil4(&f, x, h);
    let d2 = stencil4(&f, x, 0.5 * h);
    (16.0 * d2 - d1) / 15.0
}

/// Component-wise [`derivative`] of a vector-valued function.
pub fn derivative_vec<F: Fn(f64) -> Vec<f64>>(f: F, x: f64, h: f64) -> Vec<f64> {
    let h = scaled_step(x, h);
    let st = |h: f64| -> Vec<f64> {
        let (a, b, c, d) = (f(x + 2.0 * h), f(x + h), f(x - h), f(x - 2.0 * h));
        (0..a.len())
            .map(|i| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + d[i]) / (12.0 * h))
            .collect()
    };
    let d1 = st(h);
    let d2 = st(0.5 * h);
    d1.iter()
        .zip(d2.iter())
        .map(|(p, q)| (16.0 * q - p) / 15.0)
        .collect()
}

/// Higher derivative `d^k f / dx^k` by repeated application of [`derivative`].
pub fn nth_derivative<F: Fn(f64) -> f64 + Copy>(f: F, x: f64, k: usize, h: f64) -> f64 {
    match k {
        0 => f(x),
        _ => derivative(move |t| nth_derivative(f, t, k - 1, h), x, h),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn richardson_beats_plain_stencil() {
        let f = |x: f64| (3.0 * x).sin() * x.exp();
        let exact = |x: f64| 3.0 * (3.0 * x).cos() * x.exp() + (3.0 * x).sin() * x.exp();
        let x = 0.37;
        let err = (derivative(f, x, 1e-2) - exact(x)).abs();
        let plain = (stencil4(&f, x, 1e-2) - exact(x)).abs();
        assert!(err < plain);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn vector_version_matches_scalar() {
        let v = derivative_vec(|x| vec![x * x, x.cos()], 1.2, DEFAULT_STEP);
        assert!((v[0] - 2.4).abs() < 1e-10);
        assert!((v[1] + 1.2f64.sin()).abs() < 1e-10);
    }
}
