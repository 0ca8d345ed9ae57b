//! G(t) = Σ ν_k t^k = Γ(α+1) e^{αt} (1−t)^{−(α+1)}, with k! ν_k = μ̃_{k+2}.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::specfun::gamma;

use super::check_alpha;

const CONTOUR_RADIUS: f64 = 0.5;
const CONTOUR_NODES: usize = 256;
const COMPLEX_STEP: f64 = 1e-30;

fn g_complex(t: Complex64, alpha: f64, g1: f64) -> Complex64 {
    (alpha * t - (alpha + 1.0) * (1.0 - t).ln()).exp() * g1
}

fn check_t(t: f64) -> Result<()> {
    if t.abs() < 1.0 {
        Ok(())
    } else {
        Err(domain("generating_function", format!("|t| must be below 1, got {t}")))
    }
}

/// G(t) for |t| < 1.
pub fn generating_function(t: f64, alpha: f64) -> Result<f64> {
    check_alpha("generating_function", alpha)?;
    check_t(t)?;
    let v = gamma(alpha + 1.0)? * (alpha * t).exp() * (1.0 - t).powf(-(alpha + 1.0));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("generating_function"))
    }
}

/// G′(t) by the complex-step derivative Im G(t + ih) / h.
pub fn generating_derivative(t: f64, alpha: f64) -> Result<f64> {
    check_alpha("generating_derivative", alpha)?;
    check_t(t)?;
    let g1 = gamma(alpha + 1.0)?;
    Ok(g_complex(Complex64::new(t, COMPLEX_STEP), alpha, g1).im / COMPLEX_STEP)
}

/// ν_k, the k-th Taylor coefficient of G at 0, from the Cauchy integral on
/// |t| = 1/2 discretised by the trapezoidal rule.
pub fn taylor_coefficient(k: usize, alpha: f64) -> Result<f64> {
    check_alpha("taylor_coefficient", alpha)?;
    let g1 = gamma(alpha + 1.0)?;
    let n = CONTOUR_NODES.max(4 * k);
    let sum: Complex64 = (0..n)
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / n as f64;
            let t = Complex64::from_polar(CONTOUR_RADIUS, theta);
            g_complex(t, alpha, g1) * Complex64::from_polar(1.0, -(k as f64) * theta)
        })
        .sum();
    let v = sum.re / n as f64 / CONTOUR_RADIUS.powi(k as i32);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("taylor_coefficient"))
    }
}

/// |(1−t)G′(t) + (αt − 2α − 1)G(t)| / |G(t)|.
pub fn ode_residual(t: f64, alpha: f64) -> Result<f64> {
    let g = generating_function(t, alpha)?;
    let dg = generating_derivative(t, alpha)?;
    Ok(((1.0 - t) * dg + (alpha * t - 2.0 * alpha - 1.0) * g).abs() / g.abs())
}
