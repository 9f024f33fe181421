//! Reduced rational functions in `t1, t2` over the rationals.
//!
//! A nonzero value is stored as `scale · t1^a t2^b · num / den` where `num`
//! and `den` are primitive integer polynomials, coprime, not divisible by
//! `t1` or `t2`, and with positive sign-defining coefficient. This makes the
//! representation unique, so structural equality is mathematical equality.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::laurent::{MonomialMap, TLaurent, TMonomial};
use super::rational::Rational;
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scale: Rational,
    shift: TMonomial,
    num: ZPoly,
    den: ZPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

fn sub_monomial(a: TMonomial, b: TMonomial) -> TMonomial {
    TMonomial::new(a.e1 - b.e1, a.e2 - b.e2)
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { scale: Rational::zero(), shift: TMonomial::ONE, num: ZPoly::zero(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: c, shift: TMonomial::ONE, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::constant(Rational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(m: TMonomial) -> Self {
        RatFunc { scale: Rational::one(), shift: m, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_laurent(l: &TLaurent) -> Self {
        if l.is_zero() {
            return RatFunc::zero();
        }
        let (s, m, z) = l.to_zpoly();
        RatFunc::assemble(s, m, z, ZPoly::one(), false)
    }

    /// `num / den`, reduced. Fails on a zero denominator.
    pub fn new(num: &TLaurent, den: &TLaurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero());
        }
        let (sn, mn, zn) = num.to_zpoly();
        let (sd, md, zd) = den.to_zpoly();
        Ok(RatFunc::assemble(sn / sd, sub_monomial(mn, md), zn, zd, true))
    }

    /// Normalize content, sign and monomial factors; optionally cancel the gcd.
    fn assemble(mut scale: Rational, mut shift: TMonomial, mut num: ZPoly, mut den: ZPoly, reduce: bool) -> Self {
        if num.is_zero() || scale.is_zero() {
            return RatFunc::zero();
        }
        for (poly, sign) in [(&mut num, 1i64), (&mut den, -1i64)] {
            let (a, b) = poly.monomial_content();
            if a > 0 || b > 0 {
                *poly = poly.unshift(a, b);
                shift = shift.mul(TMonomial::new(sign * a as i64, sign * b as i64));
            }
            let mut c = poly.content();
            if poly.lead().is_negative() {
                c = -c;
            }
            if !c.is_one() {
                *poly = poly.div_scalar(&c).expect("content divides");
                let c = Rational::from_integer(c);
                scale = if sign > 0 { scale * c } else { scale / c };
            }
        }
        if reduce && !den.is_one() && !num.is_one() {
            let g = gcd(&num, &den);
            if !g.is_one() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        RatFunc { scale, shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.scale.is_one() && self.shift.is_one() && self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is a monomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_laurent(&self) -> Option<TLaurent> {
        self.is_laurent().then(|| self.numerator())
    }

    /// Canonical numerator: the denominator's lexicographically least
    /// monomial gets coefficient 1 and all monomial factors sit here.
    pub fn numerator(&self) -> TLaurent {
        if self.is_zero() {
            return TLaurent::zero();
        }
        let lead = self.den_low_coeff();
        TLaurent::from_zpoly(&(&self.scale / Rational::from_integer(lead)), self.shift, &self.num)
    }

    pub fn denominator(&self) -> TLaurent {
        let lead = Rational::from_integer(self.den_low_coeff());
        TLaurent::from_zpoly(&lead.recip(), TMonomial::ONE, &self.den)
    }

    fn den_low_coeff(&self) -> BigInt {
        self.den
            .terms()
            .map(|(a, b, c)| ((a, b), c))
            .min_by_key(|(k, _)| *k)
            .map(|(_, c)| c.clone())
            .expect("nonzero denominator")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { scale: -&self.scale, ..self.clone() }
    }

    pub fn scale_by(&self, r: &Rational) -> RatFunc {
        if r.is_zero() || self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: &self.scale * r, ..self.clone() }
    }

    pub fn mul_monomial(&self, m: TMonomial) -> RatFunc {
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { shift: self.shift.mul(m), ..self.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        let scale = &self.scale * &o.scale;
        let shift = self.shift.mul(o.shift);
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        if !n1.is_one() && !d2.is_one() {
            let g = gcd(&n1, &d2);
            if !g.is_one() {
                n1 = n1.exact_div(&g).unwrap();
                d2 = d2.exact_div(&g).unwrap();
            }
        }
        if !n2.is_one() && !d1.is_one() {
            let g = gcd(&n2, &d1);
            if !g.is_one() {
                n2 = n2.exact_div(&g).unwrap();
                d1 = d1.exact_div(&g).unwrap();
            }
        }
        RatFunc { scale, shift, num: n1.mul(&n2), den: d1.mul(&d2) }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let base = TMonomial::new(self.shift.e1.min(o.shift.e1), self.shift.e2.min(o.shift.e2));
        let sa = sub_monomial(self.shift, base);
        let sb = sub_monomial(o.shift, base);
        let na = self.num.shift(sa.e1 as usize, sa.e2 as usize);
        let nb = o.num.shift(sb.e1 as usize, sb.e2 as usize);
        // integer cross factors from the scales
        let ka = self.scale.numer() * o.scale.denom();
        let kb = o.scale.numer() * self.scale.denom();
        let sden = Rational::new(BigInt::one(), self.scale.denom() * o.scale.denom());

        if self.den == o.den {
            let n = na.scale(&ka).add(&nb.scale(&kb));
            return RatFunc::assemble(sden, base, n, self.den.clone(), true);
        }
        let g = if self.den.is_one() || o.den.is_one() { ZPoly::one() } else { gcd(&self.den, &o.den) };
        let e1 = self.den.exact_div(&g).unwrap();
        let e2 = o.den.exact_div(&g).unwrap();
        let n = na.scale(&ka).mul(&e2).add(&nb.scale(&kb).mul(&e1));
        if n.is_zero() {
            return RatFunc::zero();
        }
        let mut out = RatFunc::assemble(sden, base, n, ZPoly::one(), false);
        // only factors of g can cancel
        let mut den = self.den.mul(&e2);
        if !g.is_one() {
            let h = gcd(&out.num, &g);
            if !h.is_one() {
                out.num = out.num.exact_div(&h).unwrap();
                den = den.exact_div(&h).unwrap();
            }
        }
        out.den = den;
        out
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFunc {
            scale: self.scale.recip(),
            shift: self.shift.inv(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i64) -> RatFunc {
        if n < 0 {
            return self.inv().expect("negative power of zero").pow(-n);
        }
        let mut acc = RatFunc::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Apply a monomial substitution; fails if the denominator maps to zero.
    pub fn map_monomials(&self, f: &MonomialMap) -> Result<RatFunc> {
        if self.is_zero() {
            return Ok(RatFunc::zero());
        }
        let num = TLaurent::from_zpoly(&self.scale, self.shift, &self.num).map_monomials(f);
        let den = TLaurent::from_zpoly(&Rational::one(), TMonomial::ONE, &self.den).map_monomials(f);
        if den.is_zero() {
            return Err(Error::DegenerateDirection(f.t1.e1, f.t2.e1));
        }
        RatFunc::new(&num, &den)
    }

    pub fn adams(&self, n: u32) -> RatFunc {
        if n == 1 {
            return self.clone();
        }
        self.map_monomials(&MonomialMap::adams(n as i64)).expect("Adams operations preserve nonzero denominators")
    }

    pub fn swap(&self) -> RatFunc {
        self.map_monomials(&MonomialMap::SWAP).expect("swap preserves nonzero denominators")
    }

    /// Exact value at `t1 = t2 = 1`.
    pub fn eval_t_one(&self) -> Result<Rational> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let d: BigInt = self.den.terms().map(|(_, _, c)| c.clone()).sum();
        if d.is_zero() {
            return Err(Error::PoleAtOne(self.to_string()));
        }
        let n: BigInt = self.num.terms().map(|(_, _, c)| c.clone()).sum();
        Ok(&self.scale * Rational::new(n, d))
    }

    /// Substitute `t1 ↦ τ^e1, t2 ↦ τ^e2`; `τ` is carried in the `t1` slot.
    pub fn subst_univariate(&self, e1: i64, e2: i64) -> Result<RatFunc> {
        if e1 == 0 && e2 == 0 {
            return Err(Error::DegenerateDirection(e1, e2));
        }
        self.map_monomials(&MonomialMap::direction(e1, e2))
    }

    pub fn eval_at(&self, t1: &Rational, t2: &Rational) -> Result<Rational> {
        let d = self.denominator().eval_at(t1, t2);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.numerator().eval_at(t1, t2) / d)
    }

    /// Total degree of numerator plus denominator, a size measure.
    pub fn weight(&self) -> usize {
        let f = |z: &ZPoly| z.deg_x().unwrap_or(0) + z.deg_y().unwrap_or(0);
        f(&self.num) + f(&self.den)
    }

    pub fn den_poly(&self) -> &ZPoly {
        &self.den
    }
}

/// Reduced normal form of `num / den`; errors on a zero denominator.
pub fn ratfunc_reduce(num: &TLaurent, den: &TLaurent) -> Result<RatFunc> {
    RatFunc::new(num, den)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.denominator();
        if d.is_one() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "({})/({})", self.numerator(), d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn l(s: &str) -> TLaurent {
        TLaurent::parse(s).unwrap()
    }

    fn rf(n: &str, d: &str) -> RatFunc {
        RatFunc::new(&l(n), &l(d)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let a = rf("1 - t1^2", "1 - t1");
        assert_eq!(a, RatFunc::from_laurent(&l("1 + t1")));
        let z = rf("t1 - t1", "1 - t2");
        assert!(z.is_zero());
        assert_eq!(z.numerator(), TLaurent::zero());
        assert_eq!(z.denominator(), TLaurent::one());
        let p = l("1 - t1").mul(&l("1 - t2"));
        let q = l("1 - t2").mul(&l("1 - t1"));
        assert!(RatFunc::new(&p, &q).unwrap().is_one());
        assert_eq!(RatFunc::new(&l("1"), &l("t1 - t1")), Err(Error::ZeroDenominator));
    }

    #[test]
    fn canonical_denominator_has_unit_low_coefficient() {
        let a = rf("2", "4*t1 - 6*t2 + 8*t2^2");
        // lexicographically least monomial of the denominator is t2 (e1 = 0, e2 = 1)
        assert_eq!(a.denominator().coeff(TMonomial::new(0, 1)), rat(1));
        assert_eq!(a.numerator(), l("-1/3"));
    }

    #[test]
    fn eval_at_one() {
        assert_eq!(rf("1 - t1^2", "1 - t1").eval_t_one().unwrap(), rat(2));
        assert_eq!(RatFunc::from_laurent(&l("t1^3*t2^-2")).eval_t_one().unwrap(), rat(1));
        assert!(matches!(rf("1", "1 - t1").eval_t_one(), Err(Error::PoleAtOne(_))));
    }

    #[test]
    fn univariate_substitution() {
        let a = RatFunc::from_laurent(&l("1 - t1*t2^-1"));
        assert_eq!(a.subst_univariate(1, 2).unwrap(), RatFunc::from_laurent(&l("1 - t1^-1")));
        assert!(a.subst_univariate(1, 1).unwrap().is_zero());
        let b = rf("1 - t1", "1 - t2");
        assert_eq!(b.subst_univariate(2, 3).unwrap(), rf("1 - t1^2", "1 - t1^3"));
        let c = rf("1", "1 - t1*t2^-1");
        assert_eq!(c.subst_univariate(1, 1), Err(Error::DegenerateDirection(1, 1)));
        assert!(b.subst_univariate(0, 0).is_err());
    }

    #[test]
    fn adams_example() {
        let a = rf("t1", "1 - t2");
        assert_eq!(a.adams(3), rf("t1^3", "1 - t2^3"));
        assert_eq!(RatFunc::from_laurent(&l("1 - t1")).adams(2), RatFunc::from_laurent(&l("1 - t1^2")));
    }

    #[test]
    fn field_operations() {
        let a = rf("1 + t1", "1 - t1*t2");
        let b = rf("t2^-1", "1 + t1");
        let s = a.add(&b);
        let lhs = s.mul(&RatFunc::from_laurent(&l("1 - t1*t2")).mul(&RatFunc::from_laurent(&l("1 + t1"))));
        let rhs = l("1 + t1").mul(&l("1 + t1")).add(&l("t2^-1").mul(&l("1 - t1*t2")));
        assert_eq!(lhs, RatFunc::from_laurent(&rhs));
        assert!(a.sub(&a).is_zero());
        assert!(a.div(&a).unwrap().is_one());
    }
}
