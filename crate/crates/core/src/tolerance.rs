//! Numerical thresholds shared by the verification pipelines.
//!
//! | constant | use |
//! |----------|-----|
//! | [`EXACT`] | identities that are exact in f64 up to rounding (Pauli algebra, ζ arithmetic) |
//! | [`zero`] | commutator / residual norms that must vanish (default 1e-10, `DFSTAB_TOL` overrides) |
//! | [`RANK`] | relative singular-value cutoff for numerical nullspaces |
//! | [`MEMBERSHIP`] | residual of a projection onto a code space |

use std::sync::OnceLock;

/// Absolute tolerance for exact-arithmetic identities.
pub const EXACT: f64 = 1e-12;

/// Default vanishing threshold for commutators and eigen-residuals.
pub const DEFAULT_ZERO: f64 = 1e-10;

/// Singular values below `RANK * sigma_max` count as zero.
pub const RANK: f64 = 1e-10;

/// Code-membership residual threshold.
pub const MEMBERSHIP: f64 = 1e-8;

/// Environment variable that overrides [`DEFAULT_ZERO`].
pub const ENV_OVERRIDE: &str = "DFSTAB_TOL";

/// Vanishing threshold, read once from `DFSTAB_TOL` if set to a positive float.
pub fn zero() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var(ENV_OVERRIDE)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(DEFAULT_ZERO)
    })
}

/// `zero()` scaled by `max(1, scale)`.
pub fn scaled(scale: f64) -> f64 {
    zero() * scale.max(1.0)
}
