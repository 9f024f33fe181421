//! Coefficient rings usable inside [`MultiSeries`](super::series::MultiSeries).

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::laurent::TLaurent;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use crate::error::{Error, Result};

pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn from_rational(r: Rational) -> Self;
    /// Raise `t1, t2` to the `n`-th power; identity on constants.
    fn adams(&self, n: u32) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    /// Numerator and denominator as canonical Laurent polynomials.
    fn to_fraction(&self) -> (TLaurent, TLaurent);
    fn from_fraction(num: &TLaurent, den: &TLaurent) -> Result<Self>;
}

impl Coefficient for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn adams(&self, _n: u32) -> Self {
        self.clone()
    }
    fn try_inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn to_fraction(&self) -> (TLaurent, TLaurent) {
        (TLaurent::constant(self.clone()), TLaurent::one())
    }
    fn from_fraction(num: &TLaurent, den: &TLaurent) -> Result<Self> {
        let f = RatFunc::new(num, den)?;
        let l = f.as_laurent().filter(|l| l.terms().all(|(m, _)| m.is_one()));
        l.map(|l| l.eval_one()).ok_or_else(|| Error::Parse(format!("expected a rational constant, got {f}")))
    }
}

impl Coefficient for TLaurent {
    fn zero() -> Self {
        TLaurent::zero()
    }
    fn one() -> Self {
        TLaurent::one()
    }
    fn is_zero(&self) -> bool {
        TLaurent::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        TLaurent::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        TLaurent::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        TLaurent::mul(self, o)
    }
    fn neg(&self) -> Self {
        TLaurent::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        TLaurent::scale(self, r)
    }
    fn from_rational(r: Rational) -> Self {
        TLaurent::constant(r)
    }
    fn adams(&self, n: u32) -> Self {
        TLaurent::adams(self, n)
    }
    fn try_inverse(&self) -> Option<Self> {
        let (m, c) = self.as_term()?;
        Some(TLaurent::term(m.inv(), c.recip()))
    }
    fn to_fraction(&self) -> (TLaurent, TLaurent) {
        (self.clone(), TLaurent::one())
    }
    fn from_fraction(num: &TLaurent, den: &TLaurent) -> Result<Self> {
        RatFunc::new(num, den)?
            .as_laurent()
            .ok_or_else(|| Error::Parse("expected a Laurent polynomial".into()))
    }
}

impl Coefficient for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        RatFunc::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        RatFunc::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        RatFunc::mul(self, o)
    }
    fn neg(&self) -> Self {
        RatFunc::neg(self)
    }
    fn scale(&self, r: &Rational) -> Self {
        self.scale_by(r)
    }
    fn from_rational(r: Rational) -> Self {
        RatFunc::constant(r)
    }
    fn adams(&self, n: u32) -> Self {
        RatFunc::adams(self, n)
    }
    fn try_inverse(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn to_fraction(&self) -> (TLaurent, TLaurent) {
        (self.numerator(), self.denominator())
    }
    fn from_fraction(num: &TLaurent, den: &TLaurent) -> Result<Self> {
        RatFunc::new(num, den)
    }
}
