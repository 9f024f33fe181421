//! Laurent polynomials in `t1, t2` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, parse_rational, rat, Rational};
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// Exponent pair of `t1^e1 t2^e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TMonomial {
    pub e1: i64,
    pub e2: i64,
}

impl TMonomial {
    pub const ONE: TMonomial = TMonomial { e1: 0, e2: 0 };

    pub const fn new(e1: i64, e2: i64) -> Self {
        TMonomial { e1, e2 }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, o: TMonomial) -> TMonomial {
        TMonomial::new(self.e1 + o.e1, self.e2 + o.e2)
    }

    pub fn pow(self, n: i64) -> TMonomial {
        TMonomial::new(self.e1 * n, self.e2 * n)
    }

    pub fn inv(self) -> TMonomial {
        self.pow(-1)
    }

    pub fn is_one(self) -> bool {
        self == TMonomial::ONE
    }
}

/// Ring endomorphism of the Laurent ring sending `t1, t2` to monomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub t1: TMonomial,
    pub t2: TMonomial,
}

impl MonomialMap {
    pub const IDENTITY: MonomialMap = MonomialMap {
        t1: TMonomial::new(1, 0),
        t2: TMonomial::new(0, 1),
    };

    pub const SWAP: MonomialMap = MonomialMap {
        t1: TMonomial::new(0, 1),
        t2: TMonomial::new(1, 0),
    };

    pub fn apply(&self, m: TMonomial) -> TMonomial {
        self.t1.pow(m.e1).mul(self.t2.pow(m.e2))
    }

    /// `self` after `first`: `x ↦ self(first(x))`.
    pub fn compose(&self, first: &MonomialMap) -> MonomialMap {
        MonomialMap { t1: self.apply(first.t1), t2: self.apply(first.t2) }
    }

    /// `t1 ↦ τ^e1, t2 ↦ τ^e2`, with `τ` stored in the `t1` slot.
    pub fn direction(e1: i64, e2: i64) -> MonomialMap {
        MonomialMap { t1: TMonomial::new(e1, 0), t2: TMonomial::new(e2, 0) }
    }

    pub fn adams(n: i64) -> MonomialMap {
        MonomialMap { t1: TMonomial::new(n, 0), t2: TMonomial::new(0, n) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TLaurent {
    terms: BTreeMap<TMonomial, Rational>,
}

impl TLaurent {
    pub fn zero() -> Self {
        TLaurent::default()
    }

    pub fn one() -> Self {
        TLaurent::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        TLaurent::term(TMonomial::ONE, c)
    }

    pub fn from_int(c: i64) -> Self {
        TLaurent::constant(rat(c))
    }

    pub fn term(m: TMonomial, c: Rational) -> Self {
        let mut t = TLaurent::zero();
        t.add_term(m, c);
        t
    }

    pub fn monomial(e1: i64, e2: i64) -> Self {
        TLaurent::term(TMonomial::new(e1, e2), Rational::one())
    }

    pub fn t1() -> Self {
        TLaurent::monomial(1, 0)
    }

    pub fn t2() -> Self {
        TLaurent::monomial(0, 1)
    }

    /// `1 - t1^e1 t2^e2`.
    pub fn one_minus(m: TMonomial) -> Self {
        TLaurent::one().sub(&TLaurent::term(m, Rational::one()))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (TMonomial, Rational)>) -> Self {
        let mut t = TLaurent::zero();
        for (m, c) in it {
            t.add_term(m, c);
        }
        t
    }

    pub fn add_term(&mut self, m: TMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(TMonomial::ONE).is_one()
    }

    pub fn coeff(&self, m: TMonomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    /// The single term, if there is exactly one.
    pub fn as_term(&self) -> Option<(TMonomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, c)| (*m, c))
        } else {
            None
        }
    }

    /// A monomial with coefficient 1.
    pub fn as_unit_monomial(&self) -> Option<TMonomial> {
        self.as_term().filter(|(_, c)| c.is_one()).map(|(m, _)| m)
    }

    pub fn add(&self, o: &TLaurent) -> TLaurent {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> TLaurent {
        TLaurent { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, o: &TLaurent) -> TLaurent {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn mul(&self, o: &TLaurent) -> TLaurent {
        let mut out = TLaurent::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> TLaurent {
        if s.is_zero() {
            return TLaurent::zero();
        }
        TLaurent { terms: self.terms.iter().map(|(m, c)| (*m, c * s)).collect() }
    }

    pub fn mul_monomial(&self, m: TMonomial) -> TLaurent {
        TLaurent { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn pow(&self, n: u32) -> TLaurent {
        let mut acc = TLaurent::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_monomials(&self, f: &MonomialMap) -> TLaurent {
        TLaurent::from_terms(self.terms.iter().map(|(m, c)| (f.apply(*m), c.clone())))
    }

    /// `t1 ↦ t1^n, t2 ↦ t2^n`.
    pub fn adams(&self, n: u32) -> TLaurent {
        self.map_monomials(&MonomialMap::adams(n as i64))
    }

    pub fn swap(&self) -> TLaurent {
        self.map_monomials(&MonomialMap::SWAP)
    }

    /// Value at `t1 = t2 = 1`.
    pub fn eval_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, c| a + c)
    }

    pub fn eval_at(&self, t1: &Rational, t2: &Rational) -> Rational {
        let pw = |b: &Rational, e: i64| -> Rational {
            if e >= 0 {
                num_traits::pow(b.clone(), e as usize)
            } else {
                num_traits::pow(b.recip(), (-e) as usize)
            }
        };
        self.terms
            .iter()
            .fold(Rational::zero(), |a, (m, c)| a + c * pw(t1, m.e1) * pw(t2, m.e2))
    }

    pub fn min_exponents(&self) -> TMonomial {
        let e1 = self.terms.keys().map(|m| m.e1).min().unwrap_or(0);
        let e2 = self.terms.keys().map(|m| m.e2).min().unwrap_or(0);
        TMonomial::new(e1, e2)
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.terms.keys().map(|m| m.e1.abs().max(m.e2.abs())).max().unwrap_or(0)
    }

    /// Write as `scale · t^shift · poly` with `poly` an integer polynomial
    /// not divisible by `t1` or `t2`. The zero polynomial gives `(0, ONE, 0)`.
    pub fn to_zpoly(&self) -> (Rational, TMonomial, ZPoly) {
        if self.is_zero() {
            return (Rational::zero(), TMonomial::ONE, ZPoly::zero());
        }
        let shift = self.min_exponents();
        let den_lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(usize, usize, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let v = c.numer() * (&den_lcm / c.denom());
                ((m.e1 - shift.e1) as usize, (m.e2 - shift.e2) as usize, v)
            })
            .collect();
        let poly = ZPoly::from_terms(ints.iter().map(|(a, b, c)| (*a, *b, c)));
        let content = poly.content();
        let poly = poly.div_scalar(&content).expect("content divides");
        (Rational::new(content, den_lcm), shift, poly)
    }

    pub fn from_zpoly(scale: &Rational, shift: TMonomial, poly: &ZPoly) -> TLaurent {
        TLaurent::from_terms(poly.terms().map(|(a, b, c)| {
            (
                TMonomial::new(a as i64 + shift.e1, b as i64 + shift.e2),
                Rational::from_integer(c.clone()) * scale,
            )
        }))
    }

    /// Exterior power `∧^k` of a (virtual) character, via Newton's identities.
    pub fn exterior_power(&self, k: u32) -> TLaurent {
        let mut e = vec![TLaurent::one()];
        let powers: Vec<TLaurent> = (1..=k).map(|i| self.adams(i)).collect();
        for n in 1..=k as usize {
            let mut acc = TLaurent::zero();
            for i in 1..=n {
                let t = e[n - i].mul(&powers[i - 1]);
                acc = if i % 2 == 1 { acc.add(&t) } else { acc.sub(&t) };
            }
            e.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(n))));
        }
        e.pop().unwrap()
    }

    /// Parse strings such as `3*t1^2*t2^-1 - 1/2*t2 + 4`.
    pub fn parse(s: &str) -> Result<TLaurent> {
        Parser::new(s).parse()
    }
}

fn fmt_monomial(m: TMonomial) -> String {
    let mut parts = Vec::new();
    for (name, e) in [("t1", m.e1), ("t2", m.e2)] {
        match e {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for TLaurent {
    /// Terms in ascending lexicographic order of `(e1, e2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            let mono = fmt_monomial(*m);
            let body = if mono.is_empty() {
                format_rational(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{}", format_rational(&a), mono)
            };
            match (i, neg) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, chars: src.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in '{}'", self.pos, self.src))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<TLaurent> {
        if self.chars.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut out = TLaurent::zero();
        let mut first = true;
        while self.pos < self.chars.len() {
            let mut sign = Rational::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if first => {}
                _ => return Err(self.err("expected '+' or '-'")),
            }
            first = false;
            let (m, c) = self.term()?;
            out.add_term(m, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(TMonomial, Rational)> {
        let mut coeff = Rational::one();
        let mut mono = TMonomial::ONE;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => coeff *= self.number()?,
                Some('t') => mono = mono.mul(self.variable()?),
                _ => return Err(self.err("expected a number or t1/t2")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((mono, coeff))
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<Rational> {
        let mut s = self.digits();
        if self.peek() == Some('/') {
            self.pos += 1;
            let d = self.digits();
            if d.is_empty() {
                return Err(self.err("expected denominator"));
            }
            s = format!("{s}/{d}");
        }
        parse_rational(&s)
    }

    fn variable(&mut self) -> Result<TMonomial> {
        self.pos += 1;
        let which = match self.peek() {
            Some('1') => TMonomial::new(1, 0),
            Some('2') => TMonomial::new(0, 1),
            _ => return Err(self.err("expected t1 or t2")),
        };
        self.pos += 1;
        if self.peek() != Some('^') {
            return Ok(which);
        }
        self.pos += 1;
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let d = self.digits();
        let e: i64 = d.parse().map_err(|_| self.err("expected exponent"))?;
        Ok(which.pow(if neg { -e } else { e }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let p = TLaurent::parse("3*t1^2*t2^-1 + 1 - t2 + 1/2*t1").unwrap();
        assert_eq!(p.to_string(), "1 - t2 + 1/2*t1 + 3*t1^2*t2^-1");
        assert_eq!(TLaurent::parse(&p.to_string()).unwrap(), p);
        assert_eq!(TLaurent::parse("t1 - t1").unwrap().to_string(), "0");
        assert!(TLaurent::parse("t1+++").is_err());
        assert!(TLaurent::parse("t3").is_err());
        assert!(TLaurent::parse("").is_err());
        assert!(TLaurent::parse("2 t1").is_err());
    }

    #[test]
    fn zpoly_round_trip() {
        let p = TLaurent::parse("2/3*t1^-1*t2 - 4/9*t2^3 + 2*t1^2").unwrap();
        let (s, m, z) = p.to_zpoly();
        assert_eq!(m, TMonomial::new(-1, 0));
        assert_eq!(TLaurent::from_zpoly(&s, m, &z), p);
    }

    #[test]
    fn exterior_powers_of_a_rank_three_character() {
        let v = TLaurent::parse("t1 + t2 + t1*t2").unwrap();
        assert_eq!(
            v.exterior_power(2),
            TLaurent::parse("t1*t2 + t1^2*t2 + t1*t2^2").unwrap()
        );
        assert_eq!(v.exterior_power(3), TLaurent::parse("t1^2*t2^2").unwrap());
        assert!(v.exterior_power(4).is_zero());
        // ∧^2(-L) = Sym^2 L for a line bundle L
        let neg = TLaurent::parse("-t1").unwrap();
        assert_eq!(neg.exterior_power(2), TLaurent::parse("t1^2").unwrap());
    }
}
