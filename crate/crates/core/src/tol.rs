//! Numerical tolerances shared across modules.

/// Relative tolerance for coefficient identities (harmonicity, cofactor checks).
pub const IDENTITY_TOL: f64 = 1e-12;

/// Coefficients below this fraction of the largest magnitude are trimmed from
/// the top degree on construction.
pub const TRIM_TOL: f64 = 1e-14;

/// Relative tolerance used to classify a Jacobian as singular.
pub const SINGULAR_TOL: f64 = 1e-12;
