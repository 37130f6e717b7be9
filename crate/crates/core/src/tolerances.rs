//! Tolerance ladder shared by every check.
//!
//! Error grows with the number of derivatives a quantity depends on, so the
//! thresholds are graded by derivative order rather than picked per check.

/// Purely algebraic identities (unit norm, Legendrian cancellation, rho identities).
pub const ALGEBRAIC: f64 = 1e-12;

/// Structure-tensor identities evaluated pointwise.
pub const STRUCTURE: f64 = 1e-10;

/// Quantities built from first and second derivatives of the immersion
/// (frame, second fundamental form, Gauss curvature).
pub const FIRST_ORDER: f64 = 1e-8;

/// Quantities that need up to fourth derivatives (bitension, nabla h,
/// C-parallel residual, Gauss-vs-intrinsic agreement).
pub const FOURTH_ORDER: f64 = 1e-6;

/// Shape-pattern residual of the adapted basis.
pub const SHAPE_PATTERN: f64 = 1e-7;

/// Eigenvalue gap below which two eigenvalues are treated as coincident.
pub const EIGEN_GAP: f64 = 1e-6;

/// Minimum mean-curvature norm for a point to count as non-minimal.
pub const NON_MINIMAL: f64 = 1e-6;

/// Threshold on the bitension norm of an off-locus control immersion.
pub const CONTROL_BITENSION: f64 = 1e-2;
