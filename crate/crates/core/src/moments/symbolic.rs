//! Exact moments in the rank-2 module over Q[α] spanned by the formal
//! symbols G = Γ(α) and T = μ̃₁.

use std::fmt;

use crate::algebra::{Ring, Q};
use crate::poly::{Poly, RationalPoly};

/// `g(α)·G + t(α)·T` with G = Γ(α) and T = μ̃₁ = e^α α^α Γ(1+α) Γ(−α, α).
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicMoment {
    pub g: RationalPoly,
    pub t: RationalPoly,
}

impl SymbolicMoment {
    pub fn zero() -> Self {
        SymbolicMoment {
            g: RationalPoly::zero(),
            t: RationalPoly::zero(),
        }
    }

    pub fn new(g: RationalPoly, t: RationalPoly) -> Self {
        SymbolicMoment { g, t }
    }

    /// The formal symbol G = Γ(α).
    pub fn gamma_symbol() -> Self {
        SymbolicMoment::new(RationalPoly::one(), RationalPoly::zero())
    }

    /// The formal symbol T = μ̃₁.
    pub fn t_symbol() -> Self {
        SymbolicMoment::new(RationalPoly::zero(), RationalPoly::one())
    }

    /// `p(α) · Γ(α+1)`, i.e. `α p(α) · G`.
    pub fn gamma_alpha_plus_one_times(p: RationalPoly) -> Self {
        SymbolicMoment::new(p.mul(&RationalPoly::x()), RationalPoly::zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        SymbolicMoment::new(self.g.add(&other.g), self.t.add(&other.t))
    }

    pub fn sub(&self, other: &Self) -> Self {
        SymbolicMoment::new(self.g.sub(&other.g), self.t.sub(&other.t))
    }

    /// Multiply by an element of Q[α].
    pub fn scale(&self, p: &RationalPoly) -> Self {
        SymbolicMoment::new(self.g.mul(p), self.t.mul(p))
    }

    /// `Some(p)` when the moment equals `p(α)·Γ(α+1)` with `p` a polynomial.
    pub fn as_gamma_alpha_plus_one_multiple(&self) -> Option<RationalPoly> {
        if !self.t.is_zero() {
            return None;
        }
        self.g.div_exact(&RationalPoly::x())
    }

    /// Numeric value at α given Γ(α) and T.
    pub fn eval(&self, alpha: f64, gamma_alpha: f64, t_value: f64) -> f64 {
        self.g.eval_f64(alpha) * gamma_alpha + self.t.eval_f64(alpha) * t_value
    }

    /// Coordinates (g(α), t(α)) at a rational α.
    pub fn at_rational(&self, alpha: &Q) -> (Q, Q) {
        (self.g.eval(alpha), self.t.eval(alpha))
    }

    /// The moment divided by G, as a polynomial in τ = T/G over a
    /// coefficient ring `C` into which α has been mapped. Used by the exact
    /// determinant systems.
    pub fn over_gamma<C: Ring>(&self, alpha: &C) -> Poly<C> {
        let lift = |p: &RationalPoly| -> C {
            p.coeffs()
                .iter()
                .rev()
                .fold(C::zero(), |acc, c| acc.mul(alpha).add(&C::from_rational(c)))
        };
        Poly::new(vec![lift(&self.g), lift(&self.t)])
    }
}

impl fmt::Display for SymbolicMoment {
    /// `(a_poly)*G + (b_poly)*T` with rationals as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*G + ({})*T", self.g.to_expr("alpha"), self.t.to_expr("alpha"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_form() {
        let m = SymbolicMoment::new(RationalPoly::from_ints(&[1]), RationalPoly::from_ints(&[-2]));
        assert_eq!(m.to_string(), "(1)*G + (-2)*T");
        let m4 = SymbolicMoment::gamma_alpha_plus_one_times(RationalPoly::from_ints(&[2, 5, 4]));
        assert_eq!(m4.to_string(), "(4*alpha^3 + 5*alpha^2 + 2*alpha)*G + (0)*T");
    }

    #[test]
    fn gamma_multiple_detection() {
        let m = SymbolicMoment::gamma_alpha_plus_one_times(RationalPoly::from_ints(&[1, 2]));
        assert_eq!(
            m.as_gamma_alpha_plus_one_multiple(),
            Some(RationalPoly::from_ints(&[1, 2]))
        );
        assert_eq!(SymbolicMoment::gamma_symbol().as_gamma_alpha_plus_one_multiple(), None);
        assert_eq!(SymbolicMoment::t_symbol().as_gamma_alpha_plus_one_multiple(), None);
    }
}
