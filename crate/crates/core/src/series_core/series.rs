//! Truncated real Puiseux series with exact exponents.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::exponent::{common_denominator, Exponent, Valuation};
use super::SeriesError;

/// Default relative zero tolerance for coefficients.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// A real Puiseux series known up to (and including) exponent `trunc`.
///
/// Terms are stored sparsely with strictly increasing exponents and nonzero
/// coefficients. Terms above `trunc` are unknown; `trunc = +∞` marks an exact
/// (polynomial) series.
#[derive(Clone, PartialEq)]
pub struct PuiseuxSeries {
    pub(crate) terms: Vec<(Exponent, f64)>,
    pub(crate) trunc: Valuation,
}

fn max_abs(terms: &[(Exponent, f64)]) -> f64 {
    terms.iter().fold(0.0_f64, |m, &(_, c)| m.max(c.abs()))
}

impl PuiseuxSeries {
    /// The exact zero series.
    pub fn zero() -> Self {
        PuiseuxSeries { terms: Vec::new(), trunc: Valuation::Infinite }
    }

    /// Zero known only up to `trunc`.
    pub fn zero_to(trunc: Valuation) -> Self {
        PuiseuxSeries { terms: Vec::new(), trunc }
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, Exponent::ZERO)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The exact series `c·t^e`.
    pub fn monomial(c: f64, e: Exponent) -> Self {
        Self::from_terms([(e, c)], Valuation::Infinite)
    }

    /// Builds a series from arbitrary `(exponent, coefficient)` pairs.
    ///
    /// Repeated exponents are summed, terms above `trunc` are dropped and
    /// coefficients at or below the default relative tolerance are removed.
    pub fn from_terms<I: IntoIterator<Item = (Exponent, f64)>>(terms: I, trunc: Valuation) -> Self {
        Self::from_terms_tol(terms, trunc, DEFAULT_ZERO_TOL)
    }

    pub fn from_terms_tol<I: IntoIterator<Item = (Exponent, f64)>>(
        terms: I,
        trunc: Valuation,
        tol: f64,
    ) -> Self {
        let mut raw: Vec<(Exponent, f64)> =
            terms.into_iter().filter(|&(e, _)| Valuation::Finite(e) <= trunc).collect();
        raw.sort_by_key(|a| a.0);
        let scale = max_abs(&raw);
        let mut merged: Vec<(Exponent, f64)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|&(_, c)| !c.is_finite() || (c != 0.0 && c.abs() > tol * scale));
        PuiseuxSeries { terms: merged, trunc }
    }

    /// Stored terms in increasing exponent order.
    pub fn terms(&self) -> &[(Exponent, f64)] {
        &self.terms
    }

    pub fn trunc(&self) -> Valuation {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_infinite()
    }

    /// True when every known term vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient; `+∞` for zero.
    pub fn val(&self) -> Valuation {
        self.terms.first().map_or(Valuation::Infinite, |&(e, _)| Valuation::Finite(e))
    }

    pub fn leading_coeff(&self) -> Option<f64> {
        self.terms.first().map(|&(_, c)| c)
    }

    /// Least `q` such that every stored exponent lies in `(1/q)Z`.
    pub fn ramification(&self) -> i64 {
        common_denominator(self.terms.iter().map(|&(e, _)| e))
    }

    /// Coefficient of `t^e`; an error if `e` lies beyond the truncation.
    pub fn coeff(&self, e: Exponent) -> Result<f64, SeriesError> {
        if Valuation::Finite(e) > self.trunc {
            return Err(SeriesError::BeyondTruncation { requested: e, trunc: self.trunc });
        }
        Ok(self.terms.binary_search_by(|probe| probe.0.cmp(&e)).map_or(0.0, |i| self.terms[i].1))
    }

    /// Drops every term above `t` and lowers the truncation accordingly.
    pub fn truncated(&self, t: Valuation) -> Self {
        let trunc = self.trunc.min(t);
        PuiseuxSeries {
            terms: self.terms.iter().copied().filter(|&(e, _)| Valuation::Finite(e) <= trunc).collect(),
            trunc,
        }
    }

    /// Removes coefficients with `|c| <= tol · max|c|`.
    pub fn chop(&self, tol: f64) -> Self {
        Self::from_terms_tol(self.terms.iter().copied(), self.trunc, tol)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|&(e, c)| (e, c * k)), self.trunc)
    }

    /// Multiplies by `t^e`.
    pub fn shift(&self, e: Exponent) -> Self {
        PuiseuxSeries { terms: self.terms.iter().map(|&(x, c)| (x + e, c)).collect(), trunc: self.trunc + e }
    }

    pub fn add_tol(&self, other: &Self, tol: f64) -> Self {
        let trunc = self.trunc.min(other.trunc);
        let scale = max_abs(&self.terms).max(max_abs(&other.terms));
        let mut out = Self::from_terms_tol(self.terms.iter().chain(other.terms.iter()).copied(), trunc, 0.0);
        out.terms.retain(|&(_, c)| c.abs() > tol * scale);
        out
    }

    pub fn mul_tol(&self, other: &Self, tol: f64) -> Self {
        let trunc = (self.trunc + other.val()).min(other.trunc + self.val());
        let scale = max_abs(&self.terms) * max_abs(&other.terms);
        let products =
            self.terms.iter().flat_map(|&(a, x)| other.terms.iter().map(move |&(b, y)| (a + b, x * y)));
        let mut out = Self::from_terms_tol(products, trunc, 0.0);
        out.terms.retain(|&(_, c)| c.abs() > tol * scale);
        out
    }

    /// Multiplicative inverse known up to `order`.
    ///
    /// The result `y` satisfies `x·y ≡ 1` modulo terms above `order`, provided
    /// `x` is known far enough; otherwise the truncation shrinks to what the
    /// input supports.
    pub fn invert(&self, order: Exponent) -> Result<Self, SeriesError> {
        let (v, c) = match self.terms.first() {
            Some(&(v, c)) => (v, c),
            None => return Err(SeriesError::ZeroDivision),
        };
        let out_trunc = Valuation::Finite(order - v).min(self.trunc + (-(v * 2)));
        let rel_trunc = out_trunc + v;
        // x = c·t^v·(1 + u) with val(u) > 0
        let u = PuiseuxSeries {
            terms: self.terms[1..].iter().map(|&(e, k)| (e - v, k / c)).collect(),
            trunc: self.trunc + (-v),
        }
        .truncated(rel_trunc);
        let neg_u = -&u;
        let mut sum = PuiseuxSeries::one().truncated(rel_trunc);
        let mut power = sum.clone();
        loop {
            power = power.mul_tol(&neg_u, 0.0).truncated(rel_trunc);
            if power.is_zero() {
                break;
            }
            sum = sum.add_tol(&power, 0.0);
        }
        let mut out = sum.shift(-v).scale(1.0 / c);
        out.trunc = out.trunc.min(out_trunc);
        Ok(out.chop(DEFAULT_ZERO_TOL))
    }

    /// True when each stored coefficient is within `tol` of `other`'s.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = self - other;
        diff.terms.iter().all(|&(_, c)| c.abs() <= tol)
    }

    /// Leading coefficient positive and every stored coefficient nonnegative.
    pub fn is_subtraction_free(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c > 0.0) && self.terms.iter().all(|&(_, c)| c >= 0.0)
    }

    /// Positive leading coefficient.
    pub fn is_positive(&self) -> bool {
        self.leading_coeff().is_some_and(|c| c > 0.0)
    }
}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_tol(rhs, DEFAULT_ZERO_TOL)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_tol(&-rhs, DEFAULT_ZERO_TOL)
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.mul_tol(rhs, DEFAULT_ZERO_TOL)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries { terms: self.terms.iter().map(|&(e, c)| (e, -c)).collect(), trunc: self.trunc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PuiseuxSeries {
            type Output = PuiseuxSeries;
            fn $m(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        -&self
    }
}

impl From<f64> for PuiseuxSeries {
    fn from(c: f64) -> Self {
        PuiseuxSeries::constant(c)
    }
}

/// Writes `t^e` in the entry grammar: `t`, `t^2`, `t^(3/2)`, `t^(-1)`.
pub fn format_power(e: Exponent) -> String {
    if e == Exponent::ONE {
        "t".to_string()
    } else if e.denom() == 1 && !e.is_negative() {
        format!("t^{}", e.numer())
    } else {
        format!("t^({e})")
    }
}

impl fmt::Display for PuiseuxSeries {
    /// Renders as `2 - 0.5*t + 0.375*t^2`; the zero series prints `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c < 0.0 { '-' } else { '+' })?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{}", format_power(e))?;
            } else {
                write!(f, "{mag}*{}", format_power(e))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if let Valuation::Finite(t) = self.trunc {
            write!(f, " + O({})", format_power(t))?;
        }
        Ok(())
    }
}
