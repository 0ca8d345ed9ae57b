//! Minimal commutative-ring abstraction shared by the exact and floating
//! code paths.
//!
//! The same generic routines (Bareiss elimination, cofactor expansion,
//! polynomial construction, synthetic division) run over `f64`, over big
//! rationals, over polynomials in α with rational coefficients, and over
//! polynomials in a formal symbol whose coefficients are themselves
//! polynomials in α.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// A commutative ring with unity, plus a partial exact division.
pub trait Ring: Clone + Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &Q) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `Some(q)` with `q * other == self` when such a `q` exists in the ring.
    /// Floating-point rings return the rounded quotient.
    fn exact_div(&self, other: &Self) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Q::from_integer(BigInt::from(v)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if *other == 0.0 {
            None
        } else {
            Some(self / other)
        }
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &Q) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Nearest double to an exact rational, robust to huge numerators and
/// denominators.
pub fn q_to_f64(q: &Q) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale both parts down to fit the exponent range.
    let nbits = q.numer().bits() as i64;
    let dbits = q.denom().bits() as i64;
    let shift_n = (nbits - 60).max(0) as usize;
    let shift_d = (dbits - 60).max(0) as usize;
    let n = (q.numer().abs() >> shift_n).to_f64().unwrap_or(f64::INFINITY);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(f64::INFINITY);
    let sign = if q.is_negative() { -1.0 } else { 1.0 };
    sign * n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// Exact conversion of a finite double to a rational.
pub fn f64_to_q(v: f64) -> Option<Q> {
    Q::from_float(v)
}

/// Parse `"p/q"`, an integer, or a finite decimal literal (`"0.25"`,
/// `"1e-3"`) into an exact rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Q::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let all = all / BigInt::from(10);
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Q::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Some(q)
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Binomial coefficient as a double (exact for the small arguments used here).
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

pub fn factorial_f64(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, i| acc * i as f64)
}
