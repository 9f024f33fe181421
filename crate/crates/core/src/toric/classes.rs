//! Equivariant K-theory classes on toric surfaces, given by their fixed-point
//! characters and, for sums of line bundles, their splitting.

use num_traits::One;

use crate::algebra::{Rational, TLaurent, TMonomial};
use crate::error::{Error, Result};
use crate::toric::surface::{Divisor, ToricSurface};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqClassS {
    pub rank: i64,
    /// Restriction to each fixed point.
    pub chars: Vec<TLaurent>,
    /// `Σ mult · O(D)` when the class is a virtual sum of line bundles.
    pub splitting: Option<Vec<(i64, Divisor)>>,
}

/// First Chern class and second Chern number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassChern {
    pub c1: Divisor,
    pub c2: i64,
}

impl EqClassS {
    pub fn line_bundle(s: &ToricSurface, d: &Divisor) -> Self {
        EqClassS::from_splitting(s, vec![(1, d.clone())])
    }

    pub fn from_splitting(s: &ToricSurface, parts: Vec<(i64, Divisor)>) -> Self {
        let chars = (0..s.fixed_points().len())
            .map(|i| {
                TLaurent::from_terms(parts.iter().map(|(m, d)| (s.line_char(d, i), Rational::from_integer((*m).into()))))
            })
            .collect();
        EqClassS { rank: parts.iter().map(|(m, _)| m).sum(), chars, splitting: Some(parts) }
    }

    pub fn trivial(s: &ToricSurface, rank: i64) -> Self {
        let zero = vec![0; s.rays().len()];
        EqClassS::from_splitting(s, vec![(rank, zero)])
    }

    pub fn canonical(s: &ToricSurface) -> Self {
        EqClassS::line_bundle(s, &s.canonical())
    }

    pub fn cotangent(s: &ToricSurface) -> Self {
        let chars = (0..s.fixed_points().len()).map(|i| s.cotangent_char(i)).collect();
        EqClassS { rank: 2, chars, splitting: None }
    }

    pub fn add(&self, o: &EqClassS) -> EqClassS {
        let chars = self.chars.iter().zip(&o.chars).map(|(a, b)| a.add(b)).collect();
        let splitting = match (&self.splitting, &o.splitting) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        EqClassS { rank: self.rank + o.rank, chars, splitting }
    }

    pub fn neg(&self) -> EqClassS {
        EqClassS {
            rank: -self.rank,
            chars: self.chars.iter().map(TLaurent::neg).collect(),
            splitting: self.splitting.as_ref().map(|v| v.iter().map(|(m, d)| (-m, d.clone())).collect()),
        }
    }

    pub fn tensor(&self, o: &EqClassS) -> EqClassS {
        let chars = self.chars.iter().zip(&o.chars).map(|(a, b)| a.mul(b)).collect();
        let splitting = match (&self.splitting, &o.splitting) {
            (Some(a), Some(b)) => Some(
                a.iter()
                    .flat_map(|(m, d)| b.iter().map(move |(n, e)| (m * n, d.iter().zip(e).map(|(x, y)| x + y).collect())))
                    .collect(),
            ),
            _ => None,
        };
        EqClassS { rank: self.rank * o.rank, chars, splitting }
    }

    /// `∧^k` of an honest bundle, computed on characters.
    pub fn wedge(&self, k: u32) -> EqClassS {
        let chars: Vec<TLaurent> = self.chars.iter().map(|c| c.exterior_power(k)).collect();
        let rank = chars.first().map(|c| c.eval_one()).map(|r| r.to_integer().try_into().unwrap_or(0)).unwrap_or(0);
        EqClassS { rank, chars, splitting: None }
    }

    /// `L^{⊗k}` for a line bundle.
    pub fn power(&self, k: i64) -> Result<EqClassS> {
        let mono: Vec<TMonomial> = self
            .chars
            .iter()
            .map(|c| c.as_unit_monomial().ok_or_else(|| Error::NotMonomial(c.to_string())))
            .collect::<Result<_>>()?;
        let splitting = match &self.splitting {
            Some(v) if v.len() == 1 && v[0].0 == 1 => Some(vec![(1, v[0].1.iter().map(|x| x * k).collect())]),
            _ => None,
        };
        Ok(EqClassS { rank: 1, chars: mono.into_iter().map(|m| TLaurent::term(m.pow(k), Rational::one())).collect(), splitting })
    }

    /// Same class with a different equivariant lift: every fiber twisted by `t^m`.
    pub fn twist(&self, m: TMonomial) -> EqClassS {
        EqClassS { rank: self.rank, chars: self.chars.iter().map(|c| c.mul_monomial(m)).collect(), splitting: self.splitting.clone() }
    }

    pub fn chern(&self, s: &ToricSurface) -> Option<ClassChern> {
        let parts = self.splitting.as_ref()?;
        let n = s.rays().len();
        let mut c1 = vec![0; n];
        let mut sq = 0;
        for (m, d) in parts {
            for (x, y) in c1.iter_mut().zip(d) {
                *x += m * y;
            }
            sq += m * s.intersect(d, d);
        }
        // ch2 = Σ m D²/2 and c2 = c1²/2 - ch2
        let c2 = (s.intersect(&c1, &c1) - sq) / 2;
        Some(ClassChern { c1, c2 })
    }
}

/// `O(d)`, `O(a,b)`, `K`, or `sum:O(..)+O(..)-O(..)`.
pub fn parse_bundle(s: &ToricSurface, spec: &str) -> Result<EqClassS> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("sum:") {
        let mut parts = Vec::new();
        let mut sign = 1;
        let mut cur = String::new();
        let mut depth = 0;
        let mut leading = true;
        for ch in rest.chars().chain(std::iter::once('+')) {
            match ch {
                '(' | ')' => {
                    depth += if ch == '(' { 1 } else { -1 };
                    cur.push(ch);
                }
                '+' | '-' if depth == 0 => {
                    if cur.trim().is_empty() {
                        if !leading {
                            return Err(Error::Parse(format!("bundle {spec:?}")));
                        }
                    } else {
                        parts.push((sign, line_divisor(s, cur.trim())?));
                    }
                    leading = false;
                    sign = if ch == '-' { -1 } else { 1 };
                    cur.clear();
                }
                c => cur.push(c),
            }
        }
        if parts.is_empty() {
            return Err(Error::Parse(format!("empty sum in {spec:?}")));
        }
        return Ok(EqClassS::from_splitting(s, parts));
    }
    Ok(EqClassS::line_bundle(s, &line_divisor(s, spec)?))
}

fn line_divisor(s: &ToricSurface, spec: &str) -> Result<Divisor> {
    if spec == "K" {
        return Ok(s.canonical());
    }
    let inner = spec
        .strip_prefix("O(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bundle {spec:?}")))?;
    let coords = inner
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("bundle {spec:?}")))?;
    s.divisor(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing_and_chern_data() {
        let p2 = ToricSurface::p2();
        let l = parse_bundle(&p2, "O(2)").unwrap();
        assert_eq!(l.rank, 1);
        assert_eq!(p2.euler_char(&l.chars).unwrap(), 6);
        let v = parse_bundle(&p2, "sum:O(1)+O(1)-O(0)").unwrap();
        assert_eq!(v.rank, 1);
        let c = v.chern(&p2).unwrap();
        assert_eq!(c.c1, p2.divisor(&[2]).unwrap());
        assert_eq!(c.c2, 1);
        assert_eq!(parse_bundle(&p2, "K").unwrap(), EqClassS::canonical(&p2));
        for bad in ["O(1,2)", "O(x)", "sum:", "Q(1)", "sum:O(1)++O(2)"] {
            assert!(matches!(parse_bundle(&p2, bad), Err(Error::Parse(_))), "{bad}");
        }
        let pp = ToricSurface::p1xp1();
        let e = parse_bundle(&pp, "sum:O(1,0)+O(0,1)").unwrap();
        assert_eq!(e.chern(&pp).unwrap().c2, 1);
    }

    #[test]
    fn exterior_powers_and_tensors() {
        let p2 = ToricSurface::p2();
        let v = parse_bundle(&p2, "sum:O(0)+O(1)+O(2)").unwrap();
        let chi = |c: &EqClassS| p2.euler_char(&c.chars).unwrap();
        assert_eq!(chi(&v), 1 + 3 + 6);
        // ∧²V = O(1) + O(2) + O(3)
        assert_eq!(chi(&v.wedge(2)), 3 + 6 + 10);
        assert_eq!(v.wedge(2).rank, 3);
        assert_eq!(chi(&v.wedge(3)), 10);
        let t = EqClassS::cotangent(&p2);
        // Euler sequence: χ(Ω(k)) = 3χ(O(k-1)) - χ(O(k))
        assert_eq!(chi(&t), -1);
        let l = parse_bundle(&p2, "O(1)").unwrap();
        assert_eq!(chi(&l.power(3).unwrap()), 10);
        assert_eq!(chi(&l.tensor(&l)), 6);
        assert_eq!(chi(&t.tensor(&l.power(3).unwrap())), 8);
    }
}
