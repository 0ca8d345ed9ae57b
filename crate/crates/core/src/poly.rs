//! Dense univariate polynomials over any [`Ring`].
//!
//! Coefficients are stored lowest degree first. The representation is
//! canonical: the zero polynomial has no coefficients and otherwise the last
//! coefficient is nonzero.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Ring, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    coeffs: Vec<C>,
}

/// Polynomial with exact rational coefficients (used both for polynomials
/// in x and for polynomials in the parameter α).
pub type RationalPoly = Poly<Q>;

impl<C: Ring> Poly<C> {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate itself.
    pub fn x() -> Self {
        Self::new(vec![C::zero(), C::one()])
    }

    pub fn monomial(c: C, k: usize) -> Self {
        let mut v = vec![C::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x + c`.
    pub fn linear_shift(c: C) -> Self {
        Self::new(vec![c, C::one()])
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&C> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&C::from_i64(k as i64)))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| acc.mul(inner).add(&Self::constant(c.clone())))
    }

    /// Coefficients of `p(x + c)`, by repeated synthetic division.
    pub fn taylor_shift(&self, c: &C) -> Self {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = a[j + 1].mul(c);
                a[j] = a[j].add(&t);
            }
        }
        Self::new(a)
    }

    /// Divide by the monic linear factor `x - root`; returns the quotient and
    /// the remainder `p(root)`.
    pub fn div_linear(&self, root: &C) -> (Self, C) {
        if self.is_zero() {
            return (Self::zero(), C::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![C::zero(); n - 1];
        let mut carry = C::zero();
        for k in (0..n).rev() {
            let v = self.coeffs[k].add(&carry.mul(root));
            if k == 0 {
                return (Self::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Long division; `None` unless every leading-coefficient quotient is
    /// exact and the remainder vanishes.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dlead = divisor.leading()?;
        let ddeg = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Some(Self::zero());
        }
        if ddeg == 0 {
            let c: Option<Vec<C>> = self.coeffs.iter().map(|a| a.exact_div(dlead)).collect();
            return Some(Self::new(c?));
        }
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return None;
        }
        let mut quot = vec![C::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let top = rem[k + ddeg].clone();
            if top.is_zero() {
                continue;
            }
            let f = top.exact_div(dlead)?;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&f.mul(d));
            }
            quot[k] = f;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::new(quot))
        } else {
            None
        }
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<C: Ring> Ring for Poly<C> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_rational(q: &Q) -> Self {
        Poly::constant(C::from_rational(q))
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
}

impl RationalPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| Q::from_integer(BigInt::from(v))).collect())
    }

    pub fn to_f64(&self) -> Poly<f64> {
        self.map(crate::algebra::q_to_f64)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.to_f64().eval(&x)
    }

    /// Splits `p = c * r` where `r` has coprime integer coefficients and a
    /// positive `c`.
    pub fn content(&self) -> (Q, Vec<BigInt>) {
        if self.is_zero() {
            return (<Q as One>::one(), Vec::new());
        }
        let lcm = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let ints: Vec<BigInt> = ints.into_iter().map(|v| v / &g).collect();
        (Q::new(g, lcm), ints)
    }

    /// Explicit-multiplication form, e.g. `4*alpha^2 + 5*alpha + 2`, with
    /// rationals written `p/q`.
    pub fn to_expr(&self, var: &str) -> String {
        let terms: Vec<(bool, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !Zero::is_zero(*c))
            .map(|(k, c)| {
                let mag = c.abs();
                let body = match (k, One::is_one(&mag)) {
                    (0, _) => fmt_q(&mag),
                    (_, true) => pow_str(var, k, ""),
                    (_, false) => format!("{}*{}", fmt_q(&mag), pow_str(var, k, "")),
                };
                (c.is_negative(), body)
            })
            .collect();
        join_terms(&terms)
    }

    /// Human-readable form with the rational content factored out, e.g.
    /// `(1/2)*(-x^3 + 4x^2 + 4x - 8)`.
    pub fn pretty(&self, var: &str) -> String {
        let (content, ints) = self.content();
        let terms: Vec<(bool, String)> = ints
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mag = c.abs();
                let body = match (k, mag.is_one()) {
                    (0, _) => mag.to_string(),
                    (_, true) => pow_str(var, k, ""),
                    (_, false) => format!("{}{}", mag, pow_str(var, k, "")),
                };
                (c.is_negative(), body)
            })
            .collect();
        let body = join_terms(&terms);
        if One::is_one(&content) {
            body
        } else if terms.len() == 1 && !terms[0].0 {
            format!("({})*{}", fmt_q(&content), body)
        } else {
            format!("({})*({})", fmt_q(&content), body)
        }
    }
}

impl Poly<f64> {
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn pretty(&self, var: &str, digits: usize) -> String {
        let terms: Vec<(bool, String)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| **c != 0.0)
            .map(|(k, c)| {
                let mag = crate::format::fmt_sig(c.abs(), digits);
                let body = if k == 0 {
                    mag
                } else if mag == "1" {
                    pow_str(var, k, "")
                } else {
                    format!("{}*{}", mag, pow_str(var, k, ""))
                };
                (*c < 0.0, body)
            })
            .collect();
        join_terms(&terms)
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn pow_str(var: &str, k: usize, sep: &str) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}{sep}^{k}"),
    }
}

fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => {
                let _ = write!(out, "-{body}");
            }
            (0, false) => out.push_str(body),
            (_, true) => {
                let _ = write!(out, " - {body}");
            }
            (_, false) => {
                let _ = write!(out, " + {body}");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q_frac, q_int};
    use proptest::prelude::*;

    fn rp(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    #[test]
    fn canonical_trailing_zeros() {
        let p = rp(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(rp(&[0, 0]).is_zero());
        assert_eq!(rp(&[]).degree(), None);
    }

    #[test]
    fn multiply_and_evaluate() {
        // (x+1)(x-1) = x^2 - 1
        let p = rp(&[1, 1]).mul(&rp(&[-1, 1]));
        assert_eq!(p, rp(&[-1, 0, 1]));
        assert_eq!(p.eval(&q_int(3)), q_int(8));
    }

    #[test]
    fn shift_and_division() {
        // p(x) = x^2; p(x+2) = x^2 + 4x + 4
        let p = rp(&[0, 0, 1]);
        assert_eq!(p.taylor_shift(&q_int(2)), rp(&[4, 4, 1]));
        let (q, r) = rp(&[4, 4, 1]).div_linear(&q_int(-2));
        assert_eq!(q, rp(&[2, 1]));
        assert_eq!(r, q_int(0));
        let (_, r) = rp(&[1, 0, 1]).div_linear(&q_int(1));
        assert_eq!(r, q_int(2));
    }

    #[test]
    fn exact_division() {
        let a = rp(&[2, 3, 1]); // (x+1)(x+2)
        assert_eq!(a.div_exact(&rp(&[1, 1])), Some(rp(&[2, 1])));
        assert_eq!(a.div_exact(&rp(&[3, 1])), None);
        assert_eq!(rp(&[2, 4]).div_exact(&rp(&[2])), Some(rp(&[1, 2])));
    }

    #[test]
    fn nested_exact_division() {
        // Polynomials in t with coefficients in Q[a]: (a t + 1)(t - a) / (t - a)
        let a = RationalPoly::x();
        let f: Poly<RationalPoly> = Poly::new(vec![RationalPoly::one(), a.clone()]);
        let g: Poly<RationalPoly> = Poly::new(vec![a.neg(), RationalPoly::one()]);
        let prod = f.mul(&g);
        assert_eq!(prod.div_exact(&g), Some(f.clone()));
        assert_eq!(prod.div_exact(&f), Some(g));
    }

    #[test]
    fn pretty_forms() {
        let p = RationalPoly::new(vec![q_int(-4), q_int(2), q_int(2), q_frac(-1, 2)]);
        assert_eq!(p.pretty("x"), "(1/2)*(-x^3 + 4x^2 + 4x - 8)");
        assert_eq!(rp(&[-3, 0, 1]).pretty("x"), "x^2 - 3");
        assert_eq!(rp(&[2, 5, 4]).to_expr("alpha"), "4*alpha^2 + 5*alpha + 2");
        assert_eq!(RationalPoly::zero().to_expr("alpha"), "0");
    }

    proptest! {
        #[test]
        fn shift_roundtrip(c in proptest::collection::vec(-50i64..50, 0..8), s in -5i64..5) {
            let p = rp(&c);
            let back = p.taylor_shift(&q_int(s)).taylor_shift(&q_int(-s));
            prop_assert_eq!(back, p);
        }

        #[test]
        fn shift_matches_composition(c in proptest::collection::vec(-50i64..50, 0..8), s in -5i64..5) {
            let p = rp(&c);
            prop_assert_eq!(p.taylor_shift(&q_int(s)), p.compose(&rp(&[s, 1])));
        }

        #[test]
        fn derivative_is_linear(a in proptest::collection::vec(-9i64..9, 0..6), b in proptest::collection::vec(-9i64..9, 0..6)) {
            let (p, q) = (rp(&a), rp(&b));
            prop_assert_eq!(p.add(&q).derivative(), p.derivative().add(&q.derivative()));
            // Leibniz rule
            prop_assert_eq!(
                p.mul(&q).derivative(),
                p.derivative().mul(&q).add(&p.mul(&q.derivative()))
            );
        }
    }
}
