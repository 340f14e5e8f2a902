//! Multivariate polynomials with rational coefficients, used for symbolic matrix patterns,
//! eigenvalue formulas and periodicity conditions.
//!
//! The textual form accepts `+ - * ^`, parentheses, integer literals and identifiers such as
//! `x1` or `a`; multiplication must be written explicitly.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

/// Variables with positive exponents, sorted by name.
type Monomial = Vec<(String, u32)>;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("cannot parse `{input}` at byte {pos}: {msg}")]
    Parse { input: String, pos: usize, msg: String },
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<String, u32> = a.iter().cloned().collect();
    for (v, e) in b {
        *map.entry(v.clone()).or_default() += e;
    }
    map.into_iter().collect()
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = Self::zero();
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn int(v: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(v)))
    }

    pub fn var(name: &str) -> Self {
        let mut e = Self::zero();
        e.terms.insert(vec![(name.to_string(), 1)], Rational::one());
        e
    }

    pub fn parse(text: &str) -> Result<Self, ExprError> {
        Parser { input: text, pos: 0 }.parse_all()
    }

    /// Parses a literal known to be well formed.
    pub fn p(text: &str) -> Self {
        Self::parse(text).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::int(1), |acc, _| &acc * self)
    }

    /// Replaces the variables for which `sub` gives a value.
    pub fn substitute(&self, sub: &dyn Fn(&str) -> Option<Expr>) -> Self {
        let mut out = Self::zero();
        for (mono, c) in &self.terms {
            let mut term = Self::constant(c.clone());
            for (v, e) in mono {
                let factor = sub(v).unwrap_or_else(|| Self::var(v));
                term = &term * &factor.pow(*e);
            }
            out = &out + &term;
        }
        out
    }

    pub fn eval(&self, env: &dyn Fn(&str) -> Option<Rational>) -> Result<Rational, ExprError> {
        let mut total = Rational::zero();
        for (mono, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in mono {
                let value = env(v).ok_or_else(|| ExprError::Unbound(v.clone()))?;
                term *= num_traits::pow(value, *e as usize);
            }
            total += term;
        }
        Ok(total)
    }

    pub fn eval_map(&self, env: &BTreeMap<String, Rational>) -> Result<Rational, ExprError> {
        self.eval(&|v| env.get(v).cloned())
    }

    /// Coefficients of a homogeneous linear form, or `None` if the expression is not one.
    pub fn linear_coefficients(&self) -> Option<BTreeMap<String, Rational>> {
        let mut out = BTreeMap::new();
        for (mono, c) in &self.terms {
            match mono.as_slice() {
                [(v, 1)] => {
                    out.insert(v.clone(), c.clone());
                }
                _ => return None,
            }
        }
        Some(out)
    }
}

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            let entry = out.terms.entry(m.clone()).or_insert_with(Rational::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self + &(-rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out = &out
                    + &Expr {
                        terms: BTreeMap::from([(mul_monomials(ma, mb), ca * cb)]),
                    };
            }
        }
        out
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Higher total degree first, then by variable order.
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| std::cmp::Reverse(m.iter().map(|(_, e)| *e).sum::<u32>()));
        for (idx, (mono, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = mono
                .iter()
                .map(|(v, e)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", format_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rational(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

struct Parser<'a> {
    input: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExprError {
        ExprError::Parse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.input[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.input[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.input[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn parse_all(mut self) -> Result<Expr, ExprError> {
        let e = self.sum()?;
        if self.peek().is_some() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut acc = if self.eat('-') { -&self.product()? } else { self.product()? };
        loop {
            if self.eat('+') {
                acc = &acc + &self.product()?;
            } else if self.eat('-') {
                acc = &acc - &self.product()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                match d.terms.get(&Vec::new()) {
                    Some(c) if d.terms.len() == 1 => acc = &acc * &Expr::constant(c.recip()),
                    _ => return Err(self.err("division only by nonzero constants")),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.input[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let exp: u32 = self.input[start..self.pos].parse().map_err(|_| self.err("expected exponent"))?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some('-') => {
                self.pos += 1;
                Ok(-&self.power()?)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.input[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let v: BigInt = self.input[start..self.pos].parse().map_err(|_| self.err("bad integer"))?;
                Ok(Expr::constant(Rational::from_integer(v)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.input[self.pos..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                Ok(Expr::var(&self.input[start..self.pos]))
            }
            _ => Err(self.err("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn parses_and_expands() {
        let e = Expr::p("(a-d)^2+4*b*c");
        let direct = &(&(&Expr::var("a") * &Expr::var("a")) - &(&Expr::int(2) * &(&Expr::var("a") * &Expr::var("d"))))
            + &(&(&Expr::var("d") * &Expr::var("d")) + &(&Expr::int(4) * &(&Expr::var("b") * &Expr::var("c"))));
        assert_eq!(e, direct);
        assert_eq!(Expr::p("x2*y1 - y1*x2"), Expr::zero());
        assert_eq!(Expr::p("-x + x"), Expr::zero());
        assert_eq!(Expr::p("(1+a)/2"), &Expr::p("a/2") + &Expr::constant(frac(1, 2)));
    }

    #[test]
    fn evaluates_with_bindings() {
        let e = Expr::p("-a^2 + a*c + b^2");
        let env = BTreeMap::from([("a".to_string(), int(1)), ("b".to_string(), int(2)), ("c".to_string(), frac(1, 2))]);
        assert_eq!(e.eval_map(&env).unwrap(), frac(7, 2));
        assert!(matches!(Expr::p("q").eval_map(&env), Err(ExprError::Unbound(_))));
    }

    #[test]
    fn linear_forms() {
        let coeffs = Expr::p("y2 + z3").linear_coefficients().unwrap();
        assert_eq!(coeffs.len(), 2);
        assert!(Expr::p("x1*y2").linear_coefficients().is_none());
    }

    #[test]
    fn display_round_trips() {
        for text in ["(y2-z3)^2+4*y3*z2", "-2*a*y2 + 3", "x1", "0"] {
            let e = Expr::p(text);
            assert_eq!(Expr::p(&e.to_string()), e);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(Expr::parse("x +").is_err());
        assert!(Expr::parse("2 x").is_err());
        assert!(Expr::parse("(x").is_err());
        assert!(Expr::parse("x / y").is_err());
    }
}
