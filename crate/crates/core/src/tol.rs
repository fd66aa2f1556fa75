//! Numerical tolerances shared across the crate.

/// Relative tolerance for cone membership. Every strict comparison in the
/// cone order is decided against this band.
pub const EPS_MEM: f64 = 1e-9;

/// Eigenvalues closer than this (relative to the spectral scale) are merged
/// into one cluster when grouping spectral values into faces.
pub const CLUSTER: f64 = 1e-8;

/// Idempotency / symmetry tolerance for projectors.
pub const PROJECTOR: f64 = 1e-12;

/// Relative singular-value cutoff for numerical rank and null spaces.
pub const RANK: f64 = 1e-9;

/// Slack for membership of sampled exponential images `exp(tM)x`, which
/// carry the error of the matrix exponential.
pub const SAMPLED: f64 = 1e-7;

/// A sampled image further outside the cone than this (relative) counts as a
/// refutation witness.
pub const REFUTE: f64 = 1e-6;

/// Residual below which a matrix is accepted as lying in a known linear
/// parametrization.
pub const PARAM_RESIDUAL: f64 = 1e-9;

/// Scale-aware comparison `|a - b| <= tol * max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
