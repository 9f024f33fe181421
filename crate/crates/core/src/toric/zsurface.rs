//! Nonequivariant descendent series of a toric surface as the `t → 1` limit
//! of the product of local `C^2` factors over the fixed points.

use rayon::prelude::*;

use crate::algebra::{MonomialMap, MultiSeries, RatFunc, Rational};
use crate::error::{Error, Result};
use crate::hilb_c2::{zc2_localization_with, EqClassC2, Orders, TorusSpec};
use crate::toric::classes::EqClassS;
use crate::toric::limit::primes;
use crate::toric::surface::ToricSurface;

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceSeries {
    pub series: MultiSeries<Rational>,
    /// Directions `(1, P)` along which the limit was taken; all agree.
    pub directions: Vec<(i64, i64)>,
}

/// Limit along the smallest valid prime direction, re-verified along the next.
pub fn z_surface(s: &ToricSurface, classes: &[EqClassS], orders: &Orders) -> Result<MultiSeries<Rational>> {
    Ok(z_surface_checked(s, classes, orders, true)?.series)
}

pub fn z_surface_checked(s: &ToricSurface, classes: &[EqClassS], orders: &Orders, verify: bool) -> Result<SurfaceSeries> {
    for c in classes {
        if c.chars.len() != s.fixed_points().len() {
            return Err(Error::InvalidModel(format!("class has {} characters, {} has {} fixed points", c.chars.len(), s.name, s.fixed_points().len())));
        }
    }
    let wanted = if verify { 2 } else { 1 };
    let mut found: Vec<((i64, i64), MultiSeries<Rational>)> = Vec::new();
    for p in primes() {
        if found.len() == wanted {
            break;
        }
        if p > 10_000 {
            return Err(Error::DegenerateDirection(1, p));
        }
        match z_surface_along(s, classes, orders, (1, p)) {
            Ok(z) => found.push(((1, p), z)),
            Err(Error::DegenerateDirection(..)) => continue,
            Err(e) => return Err(e),
        }
    }
    if let Some((d, z)) = found.iter().skip(1).find(|(_, z)| *z != found[0].1) {
        let diff = z.sub(&found[0].1)?;
        let at = diff.terms().next().map(|(e, _)| e.clone());
        return Err(Error::PoleAtOne(format!("directions {:?} and {d:?} disagree at {at:?}", found[0].0)));
    }
    let directions = found.iter().map(|(d, _)| *d).collect();
    Ok(SurfaceSeries { series: found.swap_remove(0).1, directions })
}

/// One direction: per-fixed-point factors computed with substituted weights,
/// multiplied, then every coefficient must be a Laurent polynomial in `τ`.
pub fn z_surface_along(s: &ToricSurface, classes: &[EqClassS], orders: &Orders, dir: (i64, i64)) -> Result<MultiSeries<Rational>> {
    let sub = MonomialMap::direction(dir.0, dir.1);
    let factors: Vec<MultiSeries<RatFunc>> = s
        .fixed_points()
        .par_iter()
        .enumerate()
        .map(|(i, fp)| {
            let local: Vec<EqClassC2> = classes.iter().map(|c| EqClassC2::new(c.chars[i].clone())).collect();
            let spec = TorusSpec { cell_map: sub.compose(&MonomialMap { t1: fp.w1, t2: fp.w2 }), char_map: sub };
            zc2_localization_with(&local, orders, &spec).map_err(|e| match e {
                Error::DegenerateDirection(..) => Error::DegenerateDirection(dir.0, dir.1),
                e => e,
            })
        })
        .collect::<Result<_>>()?;
    let mut prod = factors[0].clone();
    for f in &factors[1..] {
        prod = prod.mul(f)?;
    }
    prod.try_convert(|c| {
        c.as_laurent()
            .map(|l| l.eval_one())
            .ok_or_else(|| Error::PoleAtOne(format!("coefficient {c} along {dir:?}")))
    })
    .map_err(|e| match (e, &prod) {
        (Error::PoleAtOne(m), p) => {
            let at = p.terms().find(|(_, c)| !c.is_laurent()).map(|(e, _)| e.clone());
            Error::PoleAtOne(format!("at exponent {at:?}: {m}"))
        }
        (e, _) => e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use crate::algebra::TMonomial;
    use crate::toric::classes::parse_bundle;

    #[test]
    fn empty_class_list_is_geometric() {
        for s in [ToricSurface::p2(), ToricSurface::p1xp1(), ToricSurface::hirzebruch(1).unwrap()] {
            let z = z_surface_checked(&s, &[], &Orders::new(5, 0), true).unwrap();
            assert_eq!(z.directions.len(), 2);
            for n in 0..=5 {
                assert_eq!(z.series.coeff(&[n]), rat(1), "{} q^{n}", s.name);
            }
        }
    }

    #[test]
    fn first_descendent_line() {
        let p2 = ToricSurface::p2();
        let l = parse_bundle(&p2, "O(1)").unwrap();
        let z = z_surface(&p2, &[l], &Orders::new(4, 1)).unwrap();
        assert_eq!(z.coeff(&[0, 1]), rat(0));
        for n in 1..=4 {
            assert_eq!(z.coeff(&[n, 1]), rat(-3));
        }
    }

    #[test]
    fn lift_independence() {
        let s = ToricSurface::hirzebruch(1).unwrap();
        let v = parse_bundle(&s, "sum:O(1,0)+O(0,1)").unwrap();
        let o = Orders::new(3, 2);
        let a = z_surface(&s, std::slice::from_ref(&v), &o).unwrap();
        let b = z_surface(&s, &[v.twist(TMonomial::new(2, -1))], &o).unwrap();
        assert_eq!(a, b);
    }
}
