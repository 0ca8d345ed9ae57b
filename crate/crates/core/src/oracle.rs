//! Brute-force quadrature against the X₁-Laguerre weight
//! W^α(x) = x^α e^{-x} / (x+α)² on [0, ∞).
//!
//! Two strategies are available. The default splits [0, X] into geometric
//! panels, integrates each with tanh-sinh (which absorbs the x^α endpoint
//! singularity for α < 1), and certifies the discarded tail [X, ∞) with an
//! analytic bound. The second uses generalized Gauss–Laguerre nodes for the
//! weight x^α e^{-x}, computed by Golub–Welsch and cached per (α, n).
//!
//! Nothing here depends on the moment formulas; it is the ground truth the
//! rest of the crate is checked against.

use std::collections::HashMap;
use std::f64::consts::FRAC_PI_2;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::poly::Poly;
use crate::specfun;

/// A quadrature result with its error estimate. `scale` is the integral of
/// the absolute integrand, which is the natural yardstick for integrals that
/// cancel to zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub scale: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    SplitTanhSinh,
    GeneralizedGaussLaguerre,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    pub strategy: Strategy,
    /// Truncation point X; `None` picks max(40, α + 40·log10(1/tol)) and
    /// extends it until the tail bound is below tolerance.
    pub truncation_x_max: Option<f64>,
    /// Maximum tanh-sinh refinement level (step 2^-level), or the Gauss node
    /// count.
    pub levels: usize,
    pub target_rel_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            strategy: Strategy::SplitTanhSinh,
            truncation_x_max: None,
            levels: 10,
            target_rel_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn gauss(nodes: usize, target_rel_tol: f64) -> Self {
        QuadratureConfig {
            strategy: Strategy::GeneralizedGaussLaguerre,
            truncation_x_max: None,
            levels: nodes,
            target_rel_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1e-14..=1e-4).contains(&self.target_rel_tol) {
            return Err(Error::Config(format!(
                "target_rel_tol {} outside [1e-14, 1e-4]",
                self.target_rel_tol
            )));
        }
        if let Some(x) = self.truncation_x_max {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::Config(format!("truncation point {x} must be positive")));
            }
        }
        match self.strategy {
            Strategy::SplitTanhSinh if !(3..=16).contains(&self.levels) => Err(Error::Config(format!(
                "tanh-sinh levels {} outside 3..=16",
                self.levels
            ))),
            Strategy::GeneralizedGaussLaguerre if !(4..=1000).contains(&self.levels) => Err(Error::Config(format!(
                "Gauss node count {} outside 4..=1000",
                self.levels
            ))),
            _ => Ok(()),
        }
    }
}

/// What to integrate against W^α.
pub enum Integrand<'a> {
    /// Polynomial in x, coefficients lowest degree first.
    Poly(&'a [f64]),
    /// Arbitrary function with |f(x)| ≤ bound · x^degree for x ≥ 1.
    Callable {
        f: &'a (dyn Fn(f64) -> f64 + Sync),
        degree: usize,
        bound: f64,
    },
}

impl Integrand<'_> {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Integrand::Poly(c) => c.iter().rev().fold(0.0, |acc, v| acc * x + v),
            Integrand::Callable { f, .. } => f(x),
        }
    }

    fn growth(&self) -> (usize, f64) {
        match self {
            Integrand::Poly(c) => (c.len().saturating_sub(1), c.iter().map(|v| v.abs()).sum()),
            Integrand::Callable { degree, bound, .. } => (*degree, *bound),
        }
    }
}

/// W^α(x).
pub fn weight(alpha: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (alpha * x.ln() - x).exp() / ((x + alpha) * (x + alpha))
}

/// ∫₀^∞ f(x) W^α(x) dx.
pub fn weighted_integral(f: &Integrand, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(
            "weighted_integral",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    config.validate()?;
    let est = match config.strategy {
        Strategy::SplitTanhSinh => split_tanh_sinh(f, alpha, config)?,
        Strategy::GeneralizedGaussLaguerre => gauss_laguerre(f, alpha, config)?,
    };
    if !(est.error <= config.target_rel_tol * est.scale) {
        return Err(Error::Quadrature {
            estimate: est.error / est.scale.max(f64::MIN_POSITIVE),
            target: config.target_rel_tol,
        });
    }
    Ok(est)
}

/// ∫₀^∞ p(x) W^α(x) dx for a polynomial given by its coefficients.
pub fn weighted_poly_integral(coeffs: &[f64], alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    weighted_integral(&Integrand::Poly(coeffs), alpha, config)
}

/// ⟨p, q⟩ with respect to W^α.
pub fn inner_product(p: &Poly<f64>, q: &Poly<f64>, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    let prod = p.mul(q);
    weighted_poly_integral(prod.coeffs(), alpha, config)
}

/// ∫₀^∞ x^k W^α dx.
pub fn canonical_moment(k: usize, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    let mut c = vec![0.0; k + 1];
    c[k] = 1.0;
    weighted_poly_integral(&c, alpha, config)
}

/// ∫₀^∞ (x+α)^k W^α dx.
pub fn adjusted_moment(k: usize, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    let p = Poly::<f64>::linear_shift(alpha);
    let mut acc = Poly::<f64>::one();
    for _ in 0..k {
        acc = acc.mul(&p);
    }
    weighted_poly_integral(acc.coeffs(), alpha, config)
}

fn tail_bound(f: &Integrand, alpha: f64, x: f64) -> Result<f64> {
    // On [X, ∞) with X ≥ 1: |f| W ≤ bound · x^{deg+α-2} e^{-x}.
    let (deg, bound) = f.growth();
    Ok(bound * specfun::upper_incomplete_gamma(deg as f64 + alpha - 1.0, x.max(1.0))?)
}

fn split_tanh_sinh(f: &Integrand, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    let tol = config.target_rel_tol;
    let mut x_max = config
        .truncation_x_max
        .unwrap_or_else(|| 40f64.max(alpha + 40.0 * (1.0 / tol).log10()));
    let g = |x: f64| f.eval(x) * weight(alpha, x);
    loop {
        let tail = tail_bound(f, alpha, x_max)?;
        let mut edges = vec![0.0];
        let mut e = 1.0;
        while e < x_max {
            edges.push(e);
            e *= 2.0;
        }
        edges.push(x_max);
        let mut total = Estimate {
            value: 0.0,
            error: tail,
            scale: 0.0,
        };
        for w in edges.windows(2) {
            let est = tanh_sinh(&g, w[0], w[1], tol * 1e-2, config.levels)?;
            total.value += est.value;
            total.error += est.error;
            total.scale += est.scale;
        }
        if config.truncation_x_max.is_some() || tail <= 0.1 * tol * total.scale || x_max > 1e5 {
            return Ok(total);
        }
        x_max *= 1.5;
    }
}

/// Tanh-sinh quadrature on [a, b], refining the step until successive
/// levels agree to `rel_tol` of the absolute integral or `max_level` is hit.
/// Endpoint singularities are tolerated; nodes are computed from their
/// distance to the nearer endpoint.
pub fn tanh_sinh(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, max_level: usize) -> Result<Estimate> {
    const T_MAX: f64 = 4.0;
    let half = 0.5 * (b - a);
    let eval = |t: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        // Distance to the nearer endpoint: half · (1 − tanh|u|).
        let dist = half / (u.abs().exp() * cu);
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        if dist == 0.0 || w == 0.0 || !w.is_finite() {
            return Ok((0.0, 0.0));
        }
        let x = if t < 0.0 { a + dist } else { b - dist };
        if x <= a || x >= b {
            return Ok((0.0, 0.0));
        }
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence {
                func: "tanh_sinh",
                detail: format!("non-finite integrand at x={x}"),
            });
        }
        Ok((w * fx, w * fx.abs()))
    };

    let mut h = 1.0;
    let (mut sum, mut abs_sum) = eval(0.0)?;
    let mut k = 1usize;
    while k as f64 * h <= T_MAX {
        for t in [k as f64 * h, -(k as f64) * h] {
            let (s, sa) = eval(t)?;
            sum += s;
            abs_sum += sa;
        }
        k += 1;
    }
    let mut prev = sum * h;
    let mut error = f64::INFINITY;
    for _level in 1..=max_level {
        h *= 0.5;
        let mut k = 1usize;
        while k as f64 * h <= T_MAX {
            for t in [k as f64 * h, -(k as f64) * h] {
                let (s, sa) = eval(t)?;
                sum += s;
                abs_sum += sa;
            }
            k += 2;
        }
        let cur = sum * h;
        error = (cur - prev).abs();
        prev = cur;
        let scale = abs_sum * h;
        if error <= rel_tol * scale || scale == 0.0 {
            return Ok(Estimate {
                value: cur,
                error,
                scale,
            });
        }
    }
    Ok(Estimate {
        value: prev,
        error,
        scale: abs_sum * h,
    })
}

/// ∫_a^b f, tanh-sinh with a tight default level budget.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<Estimate> {
    let est = tanh_sinh(&f, a, b, rel_tol, 12)?;
    check_converged(est, rel_tol)
}

/// ∫_a^∞ f for integrands decaying at least exponentially, by exp-sinh:
/// x = a + exp(π/2 · sinh t).
pub fn integrate_semi_infinite(f: impl Fn(f64) -> f64, a: f64, rel_tol: f64) -> Result<Estimate> {
    const T_LO: f64 = -4.5;
    const T_HI: f64 = 4.5;
    let eval = |t: f64| -> Result<(f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let eu = u.exp();
        let w = FRAC_PI_2 * t.cosh() * eu;
        if eu == 0.0 {
            return Ok((0.0, 0.0));
        }
        let x = a + eu;
        if x == a || !x.is_finite() {
            return Ok((0.0, 0.0));
        }
        let fx = f(x);
        if !fx.is_finite() {
            if x > 1e100 {
                return Ok((0.0, 0.0));
            }
            return Err(Error::NoConvergence {
                func: "exp_sinh",
                detail: format!("non-finite integrand at x={x}"),
            });
        }
        let v = w * fx;
        if !v.is_finite() {
            return Ok((0.0, 0.0));
        }
        Ok((v, v.abs()))
    };
    let mut h = 0.5;
    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let n_lo = (T_LO / h).ceil() as i64;
    let n_hi = (T_HI / h).floor() as i64;
    for k in n_lo..=n_hi {
        let (s, sa) = eval(k as f64 * h)?;
        sum += s;
        abs_sum += sa;
    }
    let mut prev = sum * h;
    for _ in 0..9 {
        h *= 0.5;
        let n_lo = (T_LO / h).ceil() as i64;
        let n_hi = (T_HI / h).floor() as i64;
        for k in n_lo..=n_hi {
            if k % 2 != 0 {
                let (s, sa) = eval(k as f64 * h)?;
                sum += s;
                abs_sum += sa;
            }
        }
        let cur = sum * h;
        let err = (cur - prev).abs();
        prev = cur;
        let scale = abs_sum * h;
        if err <= rel_tol * scale {
            return Ok(Estimate {
                value: cur,
                error: err,
                scale,
            });
        }
    }
    Err(Error::NoConvergence {
        func: "exp_sinh",
        detail: format!("level budget exhausted on [{a}, inf)"),
    })
}

fn check_converged(est: Estimate, rel_tol: f64) -> Result<Estimate> {
    if est.error <= rel_tol * est.scale {
        Ok(est)
    } else {
        Err(Error::Quadrature {
            estimate: est.error / est.scale.max(f64::MIN_POSITIVE),
            target: rel_tol,
        })
    }
}

/// Generalized Gauss–Laguerre rule for the weight x^α e^{-x}.
#[derive(Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type RuleCache = RwLock<HashMap<(u64, usize), Arc<GaussRule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Golub–Welsch nodes and weights, cached per (α, n).
pub fn gauss_laguerre_rule(alpha: f64, n: usize) -> Result<Arc<GaussRule>> {
    let key = (alpha.to_bits(), n);
    if let Some(rule) = rule_cache().read().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(golub_welsch(alpha, n)?);
    let mut cache = rule_cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(cache.entry(key).or_insert(rule)))
}

fn golub_welsch(alpha: f64, n: usize) -> Result<GaussRule> {
    // Jacobi matrix of the monic generalized Laguerre recurrence.
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = 2.0 * i as f64 + alpha + 1.0;
        if i + 1 < n {
            let off = ((i as f64 + 1.0) * (i as f64 + 1.0 + alpha)).sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mu0 = specfun::gamma(alpha + 1.0)?;
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

fn gauss_laguerre(f: &Integrand, alpha: f64, config: &QuadratureConfig) -> Result<Estimate> {
    let apply = |n: usize| -> Result<(f64, f64)> {
        let rule = gauss_laguerre_rule(alpha, n)?;
        let mut s = 0.0;
        let mut sa = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = w * f.eval(*x) / ((x + alpha) * (x + alpha));
            s += v;
            sa += v.abs();
        }
        Ok((s, sa))
    };
    let n = config.levels;
    let (fine, scale) = apply(n)?;
    let (coarse, _) = apply((n / 2).max(2))?;
    Ok(Estimate {
        value: fine,
        error: (fine - coarse).abs(),
        scale,
    })
}
