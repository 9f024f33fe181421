//! Smooth projective toric surfaces from their fans.

use num_traits::{One, ToPrimitive};

use crate::algebra::series::sum_balanced;
use crate::algebra::{RatFunc, Rational, TLaurent, TMonomial};
use crate::error::{Error, Result};

/// Coefficients on the torus-invariant prime divisors, one per ray.
pub type Divisor = Vec<i64>;

/// A torus-fixed point with the characters of its two local coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub w1: TMonomial,
    pub w2: TMonomial,
    /// Indices of the two rays spanning the cone.
    pub rays: (usize, usize),
    /// Dual basis of the cone, as lattice vectors.
    dual: ((i64, i64), (i64, i64)),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricSurface {
    pub name: String,
    rays: Vec<(i64, i64)>,
    self_intersections: Vec<i64>,
    fixed_points: Vec<FixedPoint>,
    /// Divisors behind the named coordinates of `O(..)`.
    basis: Vec<Divisor>,
    chi_o: i64,
}

impl ToricSurface {
    /// Rays in cyclic order; `basis` names the coordinates used by `O(..)`.
    pub fn from_fan(name: &str, rays: Vec<(i64, i64)>, basis: Vec<Divisor>) -> Result<Self> {
        let n = rays.len();
        if n < 3 {
            return Err(Error::InvalidModel(format!("{name}: a complete fan needs at least 3 rays")));
        }
        let mut fixed_points = Vec::with_capacity(n);
        let mut self_intersections = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (rays[i], rays[(i + 1) % n]);
            let det = a.0 * b.1 - a.1 * b.0;
            if det != 1 {
                return Err(Error::InvalidModel(format!("{name}: cone {i} is not smooth and counterclockwise")));
            }
            let u1 = (b.1, -b.0);
            let u2 = (-a.1, a.0);
            fixed_points.push(FixedPoint {
                w1: TMonomial::new(u1.0, u1.1),
                w2: TMonomial::new(u2.0, u2.1),
                rays: (i, (i + 1) % n),
                dual: (u1, u2),
            });
            let (p, q, v) = (rays[(i + n - 1) % n], rays[(i + 1) % n], rays[i]);
            let s = (p.0 + q.0, p.1 + q.1);
            // s = c·v for a smooth complete fan
            let c = if v.0 != 0 { s.0 / v.0 } else { s.1 / v.1 };
            if (c * v.0, c * v.1) != s {
                return Err(Error::InvalidModel(format!("{name}: ray {i} violates the smooth wall relation")));
            }
            self_intersections.push(-c);
        }
        if basis.iter().any(|d| d.len() != n) {
            return Err(Error::InvalidModel(format!("{name}: basis divisors must have {n} entries")));
        }
        let mut s = ToricSurface { name: name.to_string(), rays, self_intersections, fixed_points, basis, chi_o: 0 };
        let trivial = vec![TLaurent::one(); n];
        s.chi_o = s.euler_char(&trivial).map_err(|e| Error::InvalidModel(format!("{name}: structure sheaf gate: {e}")))?;
        Ok(s)
    }

    pub fn p2() -> Self {
        Self::from_fan("P2", vec![(1, 0), (0, 1), (-1, -1)], vec![vec![0, 0, 1]]).expect("valid fan")
    }

    pub fn p1xp1() -> Self {
        Self::from_fan("P1xP1", vec![(1, 0), (0, 1), (-1, 0), (0, -1)], vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
            .expect("valid fan")
    }

    /// `F_a` with fiber `F` and section `H` of square `a` as named coordinates.
    pub fn hirzebruch(a: i64) -> Result<Self> {
        if a < 0 {
            return Err(Error::InvalidModel(format!("F{a}: a must be nonnegative")));
        }
        Self::from_fan(&format!("F{a}"), vec![(1, 0), (0, 1), (-1, a), (0, -1)], vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
    }

    /// `P2`, `P1xP1` or `F<a>`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "P2" => Ok(Self::p2()),
            "P1xP1" => Ok(Self::p1xp1()),
            t if t.starts_with('F') => {
                let a = t[1..].parse::<i64>().map_err(|_| Error::Parse(format!("surface {t:?}")))?;
                Self::hirzebruch(a)
            }
            t => Err(Error::Parse(format!("unknown surface {t:?}"))),
        }
    }

    pub fn rays(&self) -> &[(i64, i64)] {
        &self.rays
    }

    pub fn fixed_points(&self) -> &[FixedPoint] {
        &self.fixed_points
    }

    pub fn chi_o(&self) -> i64 {
        self.chi_o
    }

    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// `Σ c_i · basis_i`.
    pub fn divisor(&self, coords: &[i64]) -> Result<Divisor> {
        if coords.len() != self.basis.len() {
            return Err(Error::Parse(format!("{} expects {} coordinates, got {}", self.name, self.basis.len(), coords.len())));
        }
        let mut d = vec![0; self.rays.len()];
        for (c, b) in coords.iter().zip(&self.basis) {
            for (x, y) in d.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        Ok(d)
    }

    pub fn canonical(&self) -> Divisor {
        vec![-1; self.rays.len()]
    }

    pub fn intersect(&self, a: &Divisor, b: &Divisor) -> i64 {
        let n = self.rays.len();
        let mut s = 0;
        for i in 0..n {
            s += a[i] * b[i] * self.self_intersections[i];
            s += a[i] * b[(i + 1) % n] + a[(i + 1) % n] * b[i];
        }
        s
    }

    /// Fiber character of `O(D)` at fixed point `i`.
    pub fn line_char(&self, d: &Divisor, i: usize) -> TMonomial {
        let fp = &self.fixed_points[i];
        let (a, b) = (d[fp.rays.0], d[fp.rays.1]);
        let (u1, u2) = fp.dual;
        TMonomial::new(-a * u1.0 - b * u2.0, -a * u1.1 - b * u2.1)
    }

    /// Character of the cotangent fiber at fixed point `i`.
    pub fn cotangent_char(&self, i: usize) -> TLaurent {
        let fp = &self.fixed_points[i];
        TLaurent::term(fp.w1, Rational::one()).add(&TLaurent::term(fp.w2, Rational::one()))
    }

    /// Fixed-point sum `Σ_i χ_i / ((1 - w_i1)(1 - w_i2))`, required to be a
    /// Laurent polynomial; returns its value at `t = 1`.
    pub fn euler_char(&self, chars: &[TLaurent]) -> Result<i64> {
        if chars.len() != self.fixed_points.len() {
            return Err(Error::InvalidModel(format!("{} characters for {} fixed points", chars.len(), self.fixed_points.len())));
        }
        let terms = self
            .fixed_points
            .iter()
            .zip(chars)
            .map(|(fp, c)| RatFunc::new(c, &TLaurent::one_minus(fp.w1).mul(&TLaurent::one_minus(fp.w2))))
            .collect::<Result<Vec<_>>>()?;
        let total = sum_balanced(terms);
        let l = total.as_laurent().ok_or_else(|| Error::InvalidModel(format!("{}: localization sum {total} is not a Laurent polynomial", self.name)))?;
        let v = l.eval_one();
        if !v.is_integer() {
            return Err(Error::InvalidModel(format!("{}: non-integral Euler characteristic {v}", self.name)));
        }
        v.to_integer().to_i64().ok_or_else(|| Error::InvalidModel("Euler characteristic overflow".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(s: &ToricSurface, d: &Divisor) -> Vec<TLaurent> {
        (0..s.fixed_points().len()).map(|i| TLaurent::term(s.line_char(d, i), Rational::one())).collect()
    }

    #[test]
    fn structure_sheaf_gate() {
        assert_eq!(ToricSurface::p2().chi_o(), 1);
        assert_eq!(ToricSurface::p1xp1().chi_o(), 1);
        for a in 0..4 {
            assert_eq!(ToricSurface::hirzebruch(a).unwrap().chi_o(), 1);
        }
        assert!(ToricSurface::from_fan("bad", vec![(1, 0), (1, 2), (-1, -1)], vec![]).is_err());
    }

    #[test]
    fn riemann_roch_oracles() {
        let p2 = ToricSurface::p2();
        for d in -3..=4i64 {
            let div = p2.divisor(&[d]).unwrap();
            assert_eq!(p2.euler_char(&line(&p2, &div)).unwrap(), (d + 1) * (d + 2) / 2);
        }
        let k: Vec<TLaurent> = p2.fixed_points().iter().map(|f| TLaurent::term(f.w1.mul(f.w2), Rational::one())).collect();
        assert_eq!(line(&p2, &p2.canonical()), k);
        assert_eq!(p2.euler_char(&k).unwrap(), 1);
        let pp = ToricSurface::p1xp1();
        for a in 0..=3 {
            for b in 0..=3 {
                let div = pp.divisor(&[a, b]).unwrap();
                assert_eq!(pp.euler_char(&line(&pp, &div)).unwrap(), (a + 1) * (b + 1));
            }
        }
    }

    #[test]
    fn intersection_numbers() {
        let p2 = ToricSurface::p2();
        let h = p2.divisor(&[1]).unwrap();
        assert_eq!(p2.intersect(&h, &h), 1);
        assert_eq!(p2.intersect(&p2.canonical(), &p2.canonical()), 9);
        let pp = ToricSurface::p1xp1();
        let k = pp.canonical();
        assert_eq!(pp.intersect(&k, &k), 8);
        for a in 0..4 {
            let f = ToricSurface::hirzebruch(a).unwrap();
            let (fib, sec) = (f.divisor(&[1, 0]).unwrap(), f.divisor(&[0, 1]).unwrap());
            assert_eq!((f.intersect(&fib, &fib), f.intersect(&fib, &sec), f.intersect(&sec, &sec)), (0, 1, a));
            assert_eq!(f.intersect(&f.canonical(), &f.canonical()), 8);
            // K = -2H + (a - 2)F
            let k = f.divisor(&[a - 2, -2]).unwrap();
            assert_eq!(f.intersect(&k, &fib), f.intersect(&f.canonical(), &fib));
            assert_eq!(f.intersect(&k, &sec), f.intersect(&f.canonical(), &sec));
        }
    }

    #[test]
    fn single_fixed_point_is_not_polynomial() {
        let p2 = ToricSurface::p2();
        let mut chars = vec![TLaurent::zero(); 3];
        chars[0] = TLaurent::one();
        assert!(matches!(p2.euler_char(&chars), Err(Error::InvalidModel(_))));
    }
}
