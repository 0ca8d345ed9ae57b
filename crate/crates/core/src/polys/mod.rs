//! X₁-Laguerre polynomials: construction from the two moment-determinant
//! systems, the classical-Laguerre representation, the exceptional operator
//! ℓ^α and the checks built on them.

mod matrix;

pub use matrix::{
    build_matrix_a, build_matrix_a_generic, build_matrix_a_tilde, build_matrix_a_tilde_generic, solve_exact,
    solve_exact_with, solve_polynomial, DetMethod, Flavor, MomentMatrix,
};

use serde_json::{json, Value};

use crate::algebra::{q_to_f64, Ring, Q};
use crate::error::{Error, Result};
use crate::poly::{fmt_q, Poly, RationalPoly};
use crate::specfun::{gamma, ln_gamma};

/// Coefficient domains the polynomials are built over: `f64`, exact `Q` at a
/// rational α, and `RationalPoly` for α kept as an indeterminate.
pub trait Coefficient: Ring {
    /// True when `r` counts as zero next to coefficients of size `scale`.
    fn is_negligible(r: &Self, scale: f64) -> bool;
    /// Best-effort magnitude for reporting; NaN when α is symbolic.
    fn magnitude(&self) -> f64;
    fn to_json(&self) -> Value;
}

/// Float tolerance for remainders and condition residuals, relative to the
/// largest coefficient.
pub const FLOAT_ZERO_REL: f64 = 1e-10;

impl Coefficient for f64 {
    fn is_negligible(r: &Self, scale: f64) -> bool {
        r.abs() <= FLOAT_ZERO_REL * scale.max(f64::MIN_POSITIVE)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl Coefficient for Q {
    fn is_negligible(r: &Self, _: f64) -> bool {
        Ring::is_zero(r)
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(self).abs()
    }
    fn to_json(&self) -> Value {
        json!(fmt_q(self))
    }
}

impl Coefficient for RationalPoly {
    fn is_negligible(r: &Self, _: f64) -> bool {
        r.is_zero()
    }
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            f64::NAN
        }
    }
    fn to_json(&self) -> Value {
        json!(self.to_expr("alpha"))
    }
}

fn max_magnitude<C: Coefficient>(p: &Poly<C>) -> f64 {
    p.coeffs()
        .iter()
        .map(Coefficient::magnitude)
        .fold(0.0, |m, v| if v > m { v } else { m })
}

/// How the right-hand side K of a determinant system was chosen.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalization<C> {
    /// K̃_n = (−1)^n (α+n) Γ(α+n−1): leading coefficient (−1)^n/(n−1)!.
    Literature,
    Raw(C),
}

impl<C: Coefficient> Normalization<C> {
    fn to_json(&self) -> Value {
        match self {
            Normalization::Literature => json!("literature"),
            Normalization::Raw(k) => json!({ "raw": k.to_json() }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    /// Monomials x^k.
    X,
    /// Shifted monomials (x+α)^k.
    Shifted,
}

impl Basis {
    pub fn as_str(self) -> &'static str {
        match self {
            Basis::X => "x",
            Basis::Shifted => "shifted",
        }
    }
}

/// L_n^α in both the monomial and the shifted basis.
#[derive(Clone, Debug, PartialEq)]
pub struct X1Polynomial<C> {
    pub n: usize,
    pub alpha: C,
    /// c_{nk}: L = Σ c_k x^k.
    pub coeffs_x: Poly<C>,
    /// a_{nk}: L = Σ a_k (x+α)^k.
    pub coeffs_shifted: Poly<C>,
    pub normalization: Normalization<C>,
}

impl<C: Coefficient> X1Polynomial<C> {
    pub fn from_x(n: usize, alpha: C, coeffs_x: Poly<C>, normalization: Normalization<C>) -> Result<Self> {
        let coeffs_shifted = to_shifted(&coeffs_x, &alpha);
        Self::checked(n, alpha, coeffs_x, coeffs_shifted, normalization)
    }

    pub fn from_shifted(n: usize, alpha: C, coeffs_shifted: Poly<C>, normalization: Normalization<C>) -> Result<Self> {
        let coeffs_x = from_shifted(&coeffs_shifted, &alpha);
        Self::checked(n, alpha, coeffs_x, coeffs_shifted, normalization)
    }

    fn checked(
        n: usize,
        alpha: C,
        coeffs_x: Poly<C>,
        coeffs_shifted: Poly<C>,
        normalization: Normalization<C>,
    ) -> Result<Self> {
        let scale = max_magnitude(&coeffs_x);
        let c = coeffs_x.coeffs();
        let excess = c.len() > n + 1 && !c[n + 1..].iter().all(|v| C::is_negligible(v, scale));
        if excess || C::is_negligible(&coeffs_x.coeff(n), scale) {
            return Err(Error::Index(format!("constructed polynomial does not have degree {n}")));
        }
        Ok(X1Polynomial {
            n,
            alpha,
            coeffs_x,
            coeffs_shifted,
            normalization,
        })
    }

    pub fn coeffs(&self, basis: Basis) -> &Poly<C> {
        match basis {
            Basis::X => &self.coeffs_x,
            Basis::Shifted => &self.coeffs_shifted,
        }
    }

    pub fn leading_coefficient(&self) -> C {
        self.coeffs_x.coeff(self.n)
    }

    pub fn scaled(&self, c: &C) -> Self {
        X1Polynomial {
            n: self.n,
            alpha: self.alpha.clone(),
            coeffs_x: self.coeffs_x.scale(c),
            coeffs_shifted: self.coeffs_shifted.scale(c),
            normalization: Normalization::Raw(c.clone()),
        }
    }

    /// `{"n", "alpha", "basis", "coeffs", "normalization", "leading_coefficient"}`.
    pub fn to_json(&self, basis: Basis) -> Value {
        json!({
            "n": self.n,
            "alpha": self.alpha.to_json(),
            "basis": basis.as_str(),
            "coeffs": self.coeffs(basis).coeffs().iter().map(Coefficient::to_json).collect::<Vec<_>>(),
            "normalization": self.normalization.to_json(),
            "leading_coefficient": self.leading_coefficient().to_json(),
        })
    }
}

/// p(x) = Σ a_k (x+α)^k  ↦  (a_k).
pub fn to_shifted<C: Ring>(p: &Poly<C>, alpha: &C) -> Poly<C> {
    p.taylor_shift(&alpha.neg())
}

/// (a_k)  ↦  p(x) = Σ a_k (x+α)^k.
pub fn from_shifted<C: Ring>(a: &Poly<C>, alpha: &C) -> Poly<C> {
    a.taylor_shift(alpha)
}

/// Classical Laguerre p_m^β by the three-term recurrence; m = −1 gives 0.
pub fn classical_laguerre<C: Ring>(m: i64, beta: &C) -> Poly<C> {
    if m < 0 {
        return Poly::zero();
    }
    let mut prev = Poly::zero();
    let mut cur = Poly::one();
    for k in 0..m {
        // (k+1) p_{k+1} = (2k+1+β−x) p_k − (k+β) p_{k−1}
        let kc = C::from_i64(k);
        let lin = Poly::new(vec![C::from_i64(2 * k + 1).add(beta), C::from_i64(-1)]);
        let next = lin
            .mul(&cur)
            .sub(&prev.scale(&kc.add(beta)))
            .scale(&C::from_rational(&Q::new(1.into(), (k + 1).into())));
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// L_n = −(x+α+1) p_{n−1}^α + p_{n−2}^α, literature-normalized.
pub fn x1_from_classical<C: Coefficient>(n: usize, alpha: &C) -> Result<X1Polynomial<C>> {
    if n == 0 {
        return Err(Error::Index("no degree-0 member: the X1 family starts at n = 1".into()));
    }
    let n_i = n as i64;
    let v1 = Poly::new(vec![alpha.add(&C::one()), C::one()]);
    let p = v1
        .mul(&classical_laguerre(n_i - 1, alpha))
        .neg()
        .add(&classical_laguerre(n_i - 2, alpha));
    X1Polynomial::from_x(n, alpha.clone(), p, Normalization::Literature)
}

/// ℓ^α[p] = −x p″ + (x−α) q with q = [(x+α+1)p′ − p]/(x+α), the division
/// done synthetically. Fails when the remainder is not zero, i.e. when p
/// violates the exceptional condition.
pub fn apply_operator<C: Coefficient>(p: &Poly<C>, alpha: &C) -> Result<Poly<C>> {
    let (q, remainder) = operator_bracket_quotient(p, alpha);
    if !C::is_negligible(&remainder, max_magnitude(p)) {
        return Err(Error::NonzeroRemainder {
            remainder: remainder.magnitude(),
        });
    }
    let dd = p.derivative().derivative();
    let x = Poly::<C>::x();
    let x_minus_alpha = Poly::new(vec![alpha.neg(), C::one()]);
    Ok(x.mul(&dd).neg().add(&x_minus_alpha.mul(&q)))
}

fn operator_bracket_quotient<C: Ring>(p: &Poly<C>, alpha: &C) -> (Poly<C>, C) {
    let v1 = Poly::new(vec![alpha.add(&C::one()), C::one()]);
    v1.mul(&p.derivative()).sub(p).div_linear(&alpha.neg())
}

/// Both forms of the exceptional-condition residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResidual<C> {
    /// p′(−α) − p(−α).
    pub derivative_form: C,
    /// −c₀ + Σ_{k≥1} c_k [k(−α)^{k−1} − (−α)^k].
    pub coefficient_form: C,
}

pub fn exceptional_condition_residual<C: Ring>(p: &Poly<C>, alpha: &C) -> ConditionResidual<C> {
    let at = alpha.neg();
    let derivative_form = p.derivative().eval(&at).sub(&p.eval(&at));
    let coefficient_form = condition_functional(p.coeffs().len().max(1), alpha)
        .iter()
        .zip(p.coeffs())
        .fold(C::zero(), |acc, (w, c)| acc.add(&w.mul(c)));
    ConditionResidual {
        derivative_form,
        coefficient_form,
    }
}

/// Weights w_k of the condition functional Σ w_k c_k, k = 0..len.
pub fn condition_functional<C: Ring>(len: usize, alpha: &C) -> Vec<C> {
    let m = alpha.neg();
    let mut out = Vec::with_capacity(len);
    let mut pow_km1 = C::zero(); // (−α)^{k−1}, with (−α)^{−1} ↦ 0 for k = 0
    let mut pow_k = C::one();
    for k in 0..len {
        out.push(C::from_i64(k as i64).mul(&pow_km1).sub(&pow_k));
        pow_km1 = pow_k.clone();
        pow_k = pow_k.mul(&m);
    }
    out
}

/// Residual of the three-term recurrence for literature-normalized
/// L_n, L_{n+1}, L_{n+2}:
///
/// ```text
/// (n+1)[(x+α)²(n+α) − α] L_{n+2} + (n+α)[(x+α)²(x−2n−α−1) + 2α] L_{n+1}
///   + (n+α−1)[(x+α)²(n+α+1) − α] L_n
/// ```
pub fn three_term_residual<C: Ring>(l_n: &Poly<C>, l_n1: &Poly<C>, l_n2: &Poly<C>, n: usize, alpha: &C) -> Poly<C> {
    let nc = C::from_i64(n as i64);
    let n_alpha = nc.add(alpha);
    let shift = Poly::new(vec![alpha.clone(), C::one()]);
    let sq = shift.mul(&shift);
    let c2 = sq
        .scale(&n_alpha)
        .sub(&Poly::constant(alpha.clone()))
        .scale(&nc.add(&C::one()));
    let lin = Poly::new(vec![C::from_i64(-(2 * n as i64) - 1).sub(alpha), C::one()]);
    let c1 = sq.mul(&lin).add(&Poly::constant(alpha.add(alpha))).scale(&n_alpha);
    let c0 = sq
        .scale(&n_alpha.add(&C::one()))
        .sub(&Poly::constant(alpha.clone()))
        .scale(&n_alpha.sub(&C::one()));
    c2.mul(l_n2).add(&c1.mul(l_n1)).add(&c0.mul(l_n))
}

/// K̃_n = (−1)^n (α+n) Γ(α+n−1).
pub fn literature_normalization(n: usize, alpha: f64) -> Result<f64> {
    check_degree(n)?;
    crate::moments::check_alpha("literature_normalization", alpha)?;
    let v = (alpha + n as f64) * gamma(alpha + n as f64 - 1.0)?;
    if !v.is_finite() {
        return Err(Error::Overflow("literature_normalization"));
    }
    Ok(if n.is_multiple_of(2) { v } else { -v })
}

/// K̃_n / Γ(α) = (−1)^n (α+n) (α)_{n−1}, in any coefficient ring.
pub fn literature_normalization_over_gamma<C: Ring>(n: usize, alpha: &C) -> C {
    let mut v = alpha.add(&C::from_i64(n as i64));
    for i in 0..n.saturating_sub(1) {
        v = v.mul(&alpha.add(&C::from_i64(i as i64)));
    }
    if n.is_multiple_of(2) {
        v
    } else {
        v.neg()
    }
}

/// ‖L_n‖² = Γ(α+n−1)(α+n)/(n−1)! for the literature normalization.
pub fn literature_norm_squared(n: usize, alpha: f64) -> Result<f64> {
    check_degree(n)?;
    crate::moments::check_alpha("literature_norm_squared", alpha)?;
    let ln = ln_gamma(alpha + n as f64 - 1.0)? - ln_gamma(n as f64)?;
    let v = (alpha + n as f64) * ln.exp();
    if !v.is_finite() {
        return Err(Error::Overflow("literature_norm_squared"));
    }
    Ok(v)
}

pub(crate) fn check_degree(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Index("no degree-0 member: the X1 family starts at n = 1".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q_frac, q_int};
    use proptest::prelude::*;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    fn alpha_sym() -> RationalPoly {
        RationalPoly::x()
    }

    #[test]
    fn classical_low_degrees() {
        let beta = 0.7;
        assert_eq!(classical_laguerre(-1, &beta), Poly::zero());
        assert_eq!(classical_laguerre(0, &beta), Poly::one());
        let p1 = classical_laguerre(1, &beta);
        assert_eq!(p1.coeffs(), &[1.7, -1.0]);
        let p2 = classical_laguerre(2, &q_frac(1, 3));
        assert_eq!(p2.eval(&q_int(0)), q_frac(4, 3) * q_frac(7, 3) / q_int(2));
        assert_eq!(classical_laguerre(5, &q_int(2)).leading(), Some(&q_frac(-1, 120)));
    }

    #[test]
    fn classical_representation_golden() {
        // L1 = −(x+α+1), L2 = x² − α² − 2α, L3 = ½[−x³ + (α+3)x² + α(α+3)x − α(α²+4α+3)]
        let a = alpha_sym();
        let l1 = x1_from_classical(1, &a).unwrap().coeffs_x;
        assert_eq!(l1, Poly::new(vec![rp(&[-1, -1]), rp(&[-1])]));
        let l2 = x1_from_classical(2, &a).unwrap().coeffs_x;
        assert_eq!(l2, Poly::new(vec![rp(&[0, -2, -1]), rp(&[]), rp(&[1])]));
        let l3 = x1_from_classical(3, &a).unwrap().coeffs_x;
        let half = q_frac(1, 2);
        let expected = Poly::new(vec![rp(&[0, -3, -4, -1]), rp(&[0, 3, 1]), rp(&[3, 1]), rp(&[-1])])
            .map(|c: &RationalPoly| c.scale(&half));
        assert_eq!(l3, expected);
    }

    #[test]
    fn from_classical_at_one() {
        let p = x1_from_classical(3, &q_int(1)).unwrap();
        assert_eq!(p.coeffs_x.pretty("x"), "(1/2)*(-x^3 + 4x^2 + 4x - 8)");
        assert_eq!(x1_from_classical(2, &1.0).unwrap().coeffs_x.coeffs(), &[-3.0, 0.0, 1.0]);
        assert!(matches!(x1_from_classical(0, &1.0), Err(Error::Index(_))));
    }

    #[test]
    fn leading_coefficients() {
        let mut fact = 1i64;
        for n in 1..=7usize {
            if n > 1 {
                fact *= n as i64 - 1;
            }
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let p = x1_from_classical(n, &q_frac(3, 2)).unwrap();
            assert_eq!(p.leading_coefficient(), q_frac(sign, fact));
        }
    }

    #[test]
    fn eigenvalue_equation_exact() {
        let a = alpha_sym();
        for n in 1..=6 {
            let p = x1_from_classical(n, &a).unwrap().coeffs_x;
            let lp = apply_operator(&p, &a).unwrap();
            assert_eq!(lp, p.scale(&rp(&[n as i64 - 1])), "n={n}");
        }
    }

    #[test]
    fn operator_rejects_non_exceptional() {
        let alpha = 1.5;
        let p = Poly::new(vec![alpha, 1.0]);
        assert!(matches!(
            apply_operator(&p, &alpha),
            Err(Error::NonzeroRemainder { .. })
        ));
        let pq = Poly::new(vec![q_frac(3, 2), q_int(1)]);
        assert!(apply_operator(&pq, &q_frac(3, 2)).is_err());
    }

    #[test]
    fn condition_residual_examples() {
        let a = alpha_sym();
        for n in 1..=4 {
            let p = x1_from_classical(n, &a).unwrap().coeffs_x;
            let r = exceptional_condition_residual(&p, &a);
            assert!(r.derivative_form.is_zero() && r.coefficient_form.is_zero());
        }
        let one = Poly::<f64>::one();
        let r = exceptional_condition_residual(&one, &2.0);
        assert_eq!((r.derivative_form, r.coefficient_form), (-1.0, -1.0));
        // x + α: 1 − 0
        let r = exceptional_condition_residual(&Poly::new(vec![q_int(2), q_int(1)]), &q_int(2));
        assert_eq!(r.derivative_form, q_int(1));
        assert_eq!(r.coefficient_form, q_int(1));
    }

    #[test]
    fn condition_functional_rank() {
        // the condition is one nonzero functional on degree ≤ m, so its
        // kernel has dimension m and L₁..L_m span it
        let alpha = q_frac(5, 2);
        for m in 1..=6usize {
            let w = condition_functional(m + 1, &alpha);
            assert!(w.iter().any(|c| !Ring::is_zero(c)));
            let basis: Vec<_> = (1..=m)
                .map(|n| x1_from_classical(n, &alpha).unwrap().coeffs_x)
                .collect();
            // degrees 1..m are distinct so the L_n are independent
            for (i, b) in basis.iter().enumerate() {
                assert_eq!(b.degree(), Some(i + 1));
            }
        }
    }

    #[test]
    fn three_term_exact() {
        let a = alpha_sym();
        let l: Vec<_> = (1..=7).map(|n| x1_from_classical(n, &a).unwrap().coeffs_x).collect();
        for n in 1..=5 {
            let r = three_term_residual(&l[n - 1], &l[n], &l[n + 1], n, &a);
            assert!(r.is_zero(), "n={n}: {r:?}");
        }
    }

    #[test]
    fn three_term_detects_wrong_scaling() {
        let alpha = 0.5;
        let l: Vec<_> = (1..=3)
            .map(|n| x1_from_classical(n, &alpha).unwrap().coeffs_x)
            .collect();
        let ok = three_term_residual(&l[0], &l[1], &l[2], 1, &alpha);
        assert!(ok.max_abs_coeff() <= 1e-12);
        let bad = three_term_residual(&l[0], &l[1].scale(&2.0), &l[2], 1, &alpha);
        assert!(bad.max_abs_coeff() > 1e-3);
    }

    #[test]
    fn normalization_values() {
        assert_eq!(literature_normalization(1, 1.0).unwrap(), -2.0);
        assert_eq!(literature_normalization(2, 1.0).unwrap(), 3.0);
        assert!(literature_normalization(0, 1.0).is_err());
        assert_eq!(literature_norm_squared(1, 1.0).unwrap(), 2.0);
        assert_eq!(literature_normalization_over_gamma(3, &q_int(2)), q_int(-30));
        assert!((literature_normalization(3, 2.0).unwrap() + 30.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let p = x1_from_classical(2, &1.0).unwrap();
        let v = p.to_json(Basis::X);
        assert_eq!(v["n"], 2);
        assert_eq!(v["basis"], "x");
        assert_eq!(v["coeffs"], json!([-3.0, 0.0, 1.0]));
        assert_eq!(v["normalization"], "literature");
        let e = x1_from_classical(3, &q_int(1)).unwrap().to_json(Basis::Shifted);
        assert_eq!(e["basis"], "shifted");
        assert_eq!(e["coeffs"].as_array().unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn basis_conversion_involutive(c in proptest::collection::vec(-50i64..50, 1..8), num in 1i64..40, den in 1i64..9) {
            let alpha = q_frac(num, den);
            let p = Poly::new(c.iter().map(|&v| q_int(v)).collect());
            prop_assert_eq!(from_shifted(&to_shifted(&p, &alpha), &alpha), p.clone());
            // Σ a_k (x+α)^k reconstructed by composition
            let shifted = to_shifted(&p, &alpha);
            let back = shifted.compose(&Poly::new(vec![alpha.clone(), q_int(1)]));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn span_satisfies_condition(w in proptest::collection::vec(-20i64..20, 6), num in 1i64..30, den in 1i64..7) {
            let alpha = q_frac(num, den);
            let combo = (1..=6).zip(&w).fold(Poly::zero(), |acc, (n, &wi)| {
                acc.add(&x1_from_classical(n, &alpha).unwrap().coeffs_x.scale(&q_int(wi)))
            });
            let r = exceptional_condition_residual(&combo, &alpha);
            prop_assert!(Ring::is_zero(&r.derivative_form));
            prop_assert!(Ring::is_zero(&r.coefficient_form));
        }
    }
}
