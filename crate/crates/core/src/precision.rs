//! Centralized numerical tolerances.
//!
//! Every floating-point comparison made by the library, the CLI and the
//! acceptance suite draws its threshold from one [`Tolerances`] record.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Relative accuracy target of `gamma`.
    pub gamma_rel: f64,
    /// Relative accuracy target of the exponential integral and Γ(a, x).
    pub expint_rel: f64,
    /// Below this argument the exponential integral uses the power series,
    /// at or above it the continued fraction.
    pub expint_switch_x: f64,
    /// Residual bound for the E_a recurrence, in units of e^{-x}.
    pub expint_recurrence: f64,
    /// Relative bound for E_a(x) = x^{a-1} Γ(1-a, x).
    pub bridge_rel: f64,
    /// Seed relation μ̃₀ = Γ(α+1)/α − 2μ̃₁.
    pub seed_rel: f64,
    /// Numeric adjusted recursion consistency.
    pub recursion_rel: f64,
    /// Adjusted → canonical → adjusted round trip.
    pub roundtrip_rel: f64,
    /// Canonical recursion against binomial inversion.
    pub canonical_rel: f64,
    /// Taylor coefficients of the generating function and ODE residual.
    pub generating_rel: f64,
    /// Quadrature-backed moment comparisons.
    pub quadrature_rel: f64,
    /// Default quadrature target.
    pub quadrature_target: f64,
    /// Linear-system residual relative to ‖b‖.
    pub solve_residual: f64,
    /// Coefficient agreement between the two determinant representations.
    pub representation_rel: f64,
    /// Gram-matrix off-diagonal bound relative to ‖L_m‖‖L_n‖.
    pub orthogonality_rel: f64,
    /// Squared-norm agreement with the closed form.
    pub norm_rel: f64,
    /// Floating three-term recurrence residual coefficients.
    pub three_term_abs: f64,
    /// Floating exceptional-condition residual relative to ‖coeffs‖.
    pub exceptional_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            gamma_rel: 1e-13,
            expint_rel: 1e-11,
            expint_switch_x: 1.0,
            expint_recurrence: 1e-11,
            bridge_rel: 1e-10,
            seed_rel: 1e-12,
            recursion_rel: 1e-12,
            roundtrip_rel: 1e-11,
            canonical_rel: 1e-10,
            generating_rel: 1e-9,
            quadrature_rel: 1e-8,
            quadrature_target: 1e-10,
            solve_residual: 1e-10,
            representation_rel: 1e-8,
            orthogonality_rel: 1e-8,
            norm_rel: 1e-7,
            three_term_abs: 1e-9,
            exceptional_rel: 1e-10,
        }
    }
}

/// `|a - b| / max(|b|, tiny)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = b.abs().max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}
