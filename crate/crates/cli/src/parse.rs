//! Text form of Puiseux series entries.
//!
//! An entry is a signed sum of terms `c`, `t`, `c*t`, `c*t^e` and
//! `c*t^(p/q)`, where `c` is a decimal or a rational `p/q`, optionally
//! followed by an order term `O(t^e)`. Whitespace is ignored.

use std::collections::BTreeMap;

use perron_core::{Exponent, PuiseuxSeries, Valuation};

/// A syntax error at a byte offset into the parsed text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        Self { offset, message: message.into() }
    }

    /// The same error moved `base` bytes to the right.
    pub fn shifted(self, base: usize) -> Self {
        Self { offset: self.offset + base, ..self }
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn error(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        ParseError::new(self.pos, message)
    }

    /// The longest run of characters accepted by `keep`, without skipping whitespace inside.
    fn take_while(&mut self, keep: impl Fn(usize, char, &str) -> bool) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest.char_indices().find(|&(i, c)| !keep(i, c, &rest[..i])).map_or(rest.len(), |(i, _)| i);
        self.pos += len;
        &self.text[start..start + len]
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let sign = if self.eat('-') { -1 } else { 1 };
        let digits = self.take_while(|_, c, _| c.is_ascii_digit());
        if digits.is_empty() {
            return Err(ParseError::new(start, "expected an integer"));
        }
        digits.parse::<i64>().map(|n| sign * n).map_err(|_| ParseError::new(start, "integer out of range"))
    }

    /// A decimal (with optional exponent) or a rational `p/q`.
    fn coefficient(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let lexeme = self.take_while(|_, c, before| {
            c.is_ascii_digit()
                || c == '.'
                || matches!(c, 'e' | 'E') && !before.is_empty()
                || matches!(c, '+' | '-') && before.ends_with(['e', 'E'])
        });
        let value: f64 = lexeme.parse().map_err(|_| ParseError::new(start, "malformed number"))?;
        if self.eat('/') {
            let at = self.pos;
            let denom = self.integer()?;
            if denom == 0 {
                return Err(ParseError::new(at, "zero denominator"));
            }
            return Ok(value / denom as f64);
        }
        Ok(value)
    }

    /// `t`, `t^n`, `t^-n` or `t^(p/q)`; the cursor sits on `t`.
    fn power(&mut self) -> Result<Exponent, ParseError> {
        self.expect('t')?;
        if !self.eat('^') {
            return Ok(Exponent::ONE);
        }
        if !self.eat('(') {
            return self.integer().map(Exponent::integer);
        }
        let p = self.integer()?;
        let q = if self.eat('/') {
            let at = self.pos;
            let q = self.integer()?;
            if q <= 0 {
                return Err(ParseError::new(at, "denominator must be positive"));
            }
            q
        } else {
            1
        };
        self.expect(')')?;
        Ok(Exponent::new(p, q))
    }
}

enum Term {
    Plain(Exponent, f64),
    Order(Exponent),
}

fn term(cur: &mut Cursor<'_>) -> Result<Term, ParseError> {
    match cur.peek() {
        Some('t') => Ok(Term::Plain(cur.power()?, 1.0)),
        Some('O') => {
            cur.pos += 1;
            cur.expect('(')?;
            let e = cur.power()?;
            cur.expect(')')?;
            Ok(Term::Order(e))
        }
        Some(c) if c.is_ascii_digit() || c == '.' => {
            let c = cur.coefficient()?;
            if cur.eat('*') {
                Ok(Term::Plain(cur.power()?, c))
            } else {
                Ok(Term::Plain(Exponent::ZERO, c))
            }
        }
        _ => Err(cur.error("expected a term")),
    }
}

/// Parses one matrix entry.
///
/// Repeated exponents are summed and exact zeros dropped. An order term
/// `O(t^e)` marks the series as known up to exponent `e`, matching the
/// `Debug` form of truncated series.
pub fn parse_entry(text: &str) -> Result<PuiseuxSeries, ParseError> {
    let mut cur = Cursor::new(text);
    let mut terms: BTreeMap<Exponent, f64> = BTreeMap::new();
    let mut order: Option<Exponent> = None;
    let mut first = true;
    loop {
        let sign = match cur.peek() {
            None if first => return Err(cur.error("empty entry")),
            None => break,
            Some('+') => 1.0,
            Some('-') => -1.0,
            Some(_) if first => 0.0,
            Some(_) => return Err(cur.error("expected '+' or '-'")),
        };
        if sign != 0.0 {
            cur.pos += 1;
        }
        let at = cur.pos;
        if order.is_some() {
            return Err(ParseError::new(at, "terms after the order term"));
        }
        match term(&mut cur)? {
            Term::Plain(e, c) => *terms.entry(e).or_default() += if sign < 0.0 { -c } else { c },
            Term::Order(e) if sign >= 0.0 => order = Some(e),
            Term::Order(_) => return Err(ParseError::new(at, "negated order term")),
        }
        first = false;
    }
    let trunc = match order {
        Some(e) => {
            if let Some((&last, _)) = terms.iter().next_back().filter(|(&k, _)| k > e) {
                return Err(ParseError::new(0, format!("term t^({last}) lies beyond the order term")));
            }
            Valuation::Finite(e)
        }
        None => Valuation::Infinite,
    };
    Ok(PuiseuxSeries::from_terms_tol(terms, trunc, 0.0))
}

/// Renders a series so that [`parse_entry`] reads it back unchanged.
pub fn format_entry(s: &PuiseuxSeries) -> String {
    match s.trunc() {
        Valuation::Infinite => s.to_string(),
        Valuation::Finite(_) => format!("{s:?}"),
    }
}
