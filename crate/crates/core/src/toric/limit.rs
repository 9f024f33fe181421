//! Exact `t → 1` limits of fixed-point sums along one-parameter directions.

use crate::algebra::{RatFunc, Rational};
use crate::error::{Error, Result};

/// Primes in increasing order, from 2.
pub fn primes() -> impl Iterator<Item = i64> {
    (2i64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Value at `τ = 1` after `t1 ↦ τ^e1, t2 ↦ τ^e2`; the substituted function
/// must be a Laurent polynomial in `τ`.
pub fn limit_along(f: &RatFunc, e1: i64, e2: i64) -> Result<Rational> {
    let u = f.subst_univariate(e1, e2)?;
    let l = u.as_laurent().ok_or_else(|| Error::PoleAtOne(format!("{f} along ({e1}, {e2}) gives {u}")))?;
    Ok(l.eval_one())
}

/// The first two directions `(1, P)` with `P` prime and larger than every
/// exponent of `f`.
pub fn directions_for(f: &RatFunc) -> [(i64, i64); 2] {
    let bound = f.numerator().max_abs_exponent().max(f.denominator().max_abs_exponent());
    let mut ps = primes().filter(|&p| p > bound);
    [(1, ps.next().unwrap()), (1, ps.next().unwrap())]
}

/// Exact value at `t1 = t2 = 1` of a fixed-point-summed coefficient, checked
/// along two directions.
pub fn limit_t_one(f: &RatFunc) -> Result<Rational> {
    let [d1, d2] = directions_for(f);
    let a = limit_along(f, d1.0, d1.1)?;
    let b = limit_along(f, d2.0, d2.1)?;
    if a != b {
        return Err(Error::PoleAtOne(format!("{f}: directions {d1:?} and {d2:?} disagree ({a} vs {b})")));
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::TLaurent;
    use crate::toric::surface::ToricSurface;

    fn parse(n: &str, d: &str) -> RatFunc {
        RatFunc::new(&TLaurent::parse(n).unwrap(), &TLaurent::parse(d).unwrap()).unwrap()
    }

    #[test]
    fn first_primes() {
        assert_eq!(primes().take(6).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn fixed_point_sums() {
        let p2 = ToricSurface::p2();
        let terms: Vec<RatFunc> = p2
            .fixed_points()
            .iter()
            .map(|f| RatFunc::new(&TLaurent::one(), &TLaurent::one_minus(f.w1).mul(&TLaurent::one_minus(f.w2))).unwrap())
            .collect();
        let total = terms.iter().fold(RatFunc::zero(), |a, b| a.add(b));
        assert_eq!(limit_t_one(&total).unwrap(), rat(1));
        assert!(matches!(limit_t_one(&terms[0]), Err(Error::PoleAtOne(_))));
    }

    #[test]
    fn directions_agree_on_laurent_inputs() {
        let f = parse("1 - t1^3*t2^-3", "1 - t1*t2^-1");
        assert_eq!(limit_along(&f, 1, 5).unwrap(), rat(3));
        assert_eq!(limit_along(&f, 1, 7).unwrap(), rat(3));
        assert!(matches!(limit_t_one(&parse("1 - t1^3*t2^-2", "1 - t1*t2^-1")), Err(Error::PoleAtOne(_))));
        assert_eq!(limit_t_one(&parse("3*t1^2 - t2^-4", "1")).unwrap(), rat(2));
        assert!(matches!(limit_along(&parse("1", "1 - t1*t2^-1"), 1, 1), Err(Error::DegenerateDirection(1, 1))));
    }
}
