use serde::{Deserialize, Serialize};

/// Numerical thresholds shared across the crate.
///
/// Every check that compares floating point results goes through one of
/// these fields so that callers (and the `verify` command) can tighten or
/// loosen them in one place.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Largest `‖H − H†‖_F` accepted as Hermitian.
    pub hermitian: f64,
    /// Reconstruction accuracy expected from spectral functions.
    pub eigen: f64,
    /// Negative eigenvalues in `[−psd, 0]` are clamped to zero.
    pub psd: f64,
    /// Residual bound for modular-theory identities.
    pub modular: f64,
    /// Largest condition number tolerated when inverting `A ↦ AΩ` or `S`.
    pub condition_bound: f64,
    /// Relative singular-value threshold for ranks and null spaces.
    pub rank: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: 1e-10,
            eigen: 1e-9,
            psd: 1e-10,
            modular: 1e-9,
            condition_bound: 1e8,
            rank: 1e-9,
        }
    }
}
