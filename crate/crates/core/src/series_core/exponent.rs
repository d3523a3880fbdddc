//! Exact rational exponents and the extended valuation line `Q ∪ {+∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

/// A rational exponent kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Exponent(Rational64);

impl Exponent {
    pub const ZERO: Exponent = Exponent(Rational64::new_raw(0, 1));
    pub const ONE: Exponent = Exponent(Rational64::new_raw(1, 1));

    /// Builds `numer/denom`; panics on a zero denominator.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "exponent with zero denominator");
        Exponent(Rational64::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Exponent(Rational64::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Exponent(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Number of `1/q` steps in this exponent, if it is a multiple of `1/q`.
    pub fn steps(&self, q: i64) -> Option<i64> {
        let scaled = self.0 * Rational64::from_integer(q);
        scaled.is_integer().then(|| scaled.to_integer())
    }

    /// The exponent `k/q`.
    pub fn from_steps(k: i64, q: i64) -> Self {
        Exponent::new(k, q)
    }

    /// Largest multiple of `1/q` that is `<= self`.
    pub fn floor_steps(&self, q: i64) -> i64 {
        let scaled = self.0 * Rational64::from_integer(q);
        scaled.floor().to_integer()
    }

    pub fn min(self, other: Self) -> Self {
        std::cmp::min(self, other)
    }

    pub fn max(self, other: Self) -> Self {
        std::cmp::max(self, other)
    }

    /// Smallest multiple of `1/q` that is `>= self`, counted in steps.
    pub fn ceil_steps(&self, q: i64) -> i64 {
        let scaled = self.0 * Rational64::from_integer(q);
        scaled.ceil().to_integer()
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::integer(n)
    }
}

impl From<Rational64> for Exponent {
    fn from(r: Rational64) -> Self {
        Exponent(r)
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 + rhs.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 - rhs.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl Mul<i64> for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: i64) -> Exponent {
        Exponent(self.0 * Rational64::from_integer(rhs))
    }
}

impl Mul for Exponent {
    type Output = Exponent;
    fn mul(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 * rhs.0)
    }
}

impl std::ops::Div<i64> for Exponent {
    type Output = Exponent;
    fn div(self, rhs: i64) -> Exponent {
        Exponent(self.0 / Rational64::from_integer(rhs))
    }
}

impl std::ops::Div for Exponent {
    type Output = Exponent;
    fn div(self, rhs: Exponent) -> Exponent {
        Exponent(self.0 / rhs.0)
    }
}

impl std::iter::Sum for Exponent {
    fn sum<I: Iterator<Item = Exponent>>(iter: I) -> Exponent {
        iter.fold(Exponent::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error returned when a string is not of the form `p` or `p/q`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`")]
pub struct ParseExponentError(pub String);

impl FromStr for Exponent {
    type Err = ParseExponentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseExponentError(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Exponent::new(p, q))
            }
            None => t.parse::<i64>().map(Exponent::integer).map_err(|_| bad()),
        }
    }
}

/// Least common multiple of the denominators of `exps` (1 for an empty list).
pub fn common_denominator<I: IntoIterator<Item = Exponent>>(exps: I) -> i64 {
    exps.into_iter().fold(1i64, |acc, e| acc.lcm(&e.denom()))
}

/// A point of `Q ∪ {+∞}`: a valuation, an arc weight, or a tropical scalar.
///
/// `Infinite` sorts after every finite value and is never stored as a large rational.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

impl Valuation {
    pub const ZERO: Valuation = Valuation::Finite(Exponent::ZERO);

    pub fn finite(self) -> Option<Exponent> {
        match self {
            Valuation::Finite(e) => Some(e),
            Valuation::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Finite value or a panic; for call sites that already excluded `+∞`.
    pub fn expect_finite(self, what: &str) -> Exponent {
        self.finite().unwrap_or_else(|| panic!("{what}: unexpected +∞"))
    }
}

impl From<Exponent> for Valuation {
    fn from(e: Exponent) -> Self {
        Valuation::Finite(e)
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add<Exponent> for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Exponent) -> Valuation {
        self + Valuation::Finite(rhs)
    }
}

impl PartialEq<Exponent> for Valuation {
    fn eq(&self, other: &Exponent) -> bool {
        *self == Valuation::Finite(*other)
    }
}

impl PartialOrd<Exponent> for Valuation {
    fn partial_cmp(&self, other: &Exponent) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(e) => write!(f, "{e}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let e = Exponent::new(6, -4);
        assert_eq!((e.numer(), e.denom()), (-3, 2));
    }

    #[test]
    fn order_matches_rationals() {
        assert!(Exponent::new(1, 3) < Exponent::new(1, 2));
        assert!(Valuation::Finite(Exponent::integer(1_000_000)) < Valuation::Infinite);
    }

    #[test]
    fn parse_and_display() {
        let e: Exponent = " 10/4 ".parse().unwrap();
        assert_eq!(e.to_string(), "5/2");
        assert!("1/0".parse::<Exponent>().is_err());
        assert_eq!("-3".parse::<Exponent>().unwrap(), Exponent::integer(-3));
    }

    #[test]
    fn steps() {
        assert_eq!(Exponent::new(3, 2).steps(4), Some(6));
        assert_eq!(Exponent::new(1, 3).steps(2), None);
        assert_eq!(Exponent::new(7, 3).floor_steps(1), 2);
        assert_eq!(common_denominator([Exponent::new(1, 2), Exponent::new(2, 3)]), 6);
    }
}
