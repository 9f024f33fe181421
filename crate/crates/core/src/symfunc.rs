//! Symmetric functions over `Q(t1, t2)` in the power-sum basis.
//!
//! Every value carries an explicit degree cap; products and operators drop
//! power sums above it.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::rat;
use crate::algebra::series::sum_balanced;
use crate::algebra::{MultiSeries, RatFunc, Rational, TLaurent, TMonomial};
use crate::error::{Error, Result};
use crate::partitions::{enumerate, Partition};

#[derive(Clone, Debug, PartialEq)]
pub struct SymFunc {
    cap: u32,
    coeffs: BTreeMap<Partition, RatFunc>,
}

fn union(a: &Partition, b: &Partition) -> Partition {
    let mut v = a.parts().to_vec();
    v.extend_from_slice(b.parts());
    Partition::new(v)
}

fn one_minus(m: TMonomial) -> RatFunc {
    RatFunc::from_laurent(&TLaurent::one_minus(m))
}

impl SymFunc {
    pub fn zero(cap: u32) -> Self {
        SymFunc { cap, coeffs: BTreeMap::new() }
    }

    pub fn one(cap: u32) -> Self {
        SymFunc::power_sum(Partition::empty(), cap)
    }

    /// `p_μ`, or zero when `|μ|` exceeds the cap.
    pub fn power_sum(mu: Partition, cap: u32) -> Self {
        let mut s = SymFunc::zero(cap);
        s.add_term(mu, RatFunc::one());
        s
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn with_cap(&self, cap: u32) -> Self {
        let coeffs = self.coeffs.iter().filter(|(m, _)| m.size() <= cap).map(|(m, c)| (m.clone(), c.clone())).collect();
        SymFunc { cap, coeffs }
    }

    pub fn add_term(&mut self, mu: Partition, c: RatFunc) {
        if c.is_zero() || mu.size() > self.cap {
            return;
        }
        let slot = self.coeffs.entry(mu.clone()).or_default();
        *slot = slot.add(&c);
        if slot.is_zero() {
            self.coeffs.remove(&mu);
        }
    }

    pub fn coeff(&self, mu: &Partition) -> RatFunc {
        self.coeffs.get(mu).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &RatFunc)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &SymFunc) -> SymFunc {
        let mut out = SymFunc::zero(self.cap.min(o.cap));
        for (m, c) in self.coeffs.iter().chain(&o.coeffs) {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> SymFunc {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, o: &SymFunc) -> SymFunc {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &RatFunc) -> SymFunc {
        self.map_coeffs(|c| c.mul(k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> SymFunc {
        let mut out = SymFunc::zero(self.cap);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<SymFunc> {
        let mut out = SymFunc::zero(self.cap);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &SymFunc) -> SymFunc {
        let cap = self.cap.min(o.cap);
        let mut acc: BTreeMap<Partition, Vec<RatFunc>> = BTreeMap::new();
        for (a, ca) in &self.coeffs {
            for (b, cb) in &o.coeffs {
                if a.size() + b.size() <= cap {
                    acc.entry(union(a, b)).or_default().push(ca.mul(cb));
                }
            }
        }
        let mut out = SymFunc::zero(cap);
        for (m, cs) in acc {
            out.add_term(m, sum_balanced(cs));
        }
        out
    }

    pub fn homogeneous(&self, d: u32) -> SymFunc {
        let coeffs = self.coeffs.iter().filter(|(m, _)| m.size() == d).map(|(m, c)| (m.clone(), c.clone())).collect();
        SymFunc { cap: self.cap, coeffs }
    }

    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.coeffs.keys().all(|m| m.size() == d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().map(|m| m.size()).max()
    }

    /// Diagonal plethysm `p_k ↦ f(k)·p_k`.
    pub fn subst_diag(&self, f: impl Fn(u32) -> RatFunc) -> SymFunc {
        let table: Vec<RatFunc> = (0..=self.cap).map(|k| if k == 0 { RatFunc::one() } else { f(k) }).collect();
        self.map_terms(|mu, c| mu.parts().iter().fold(c.clone(), |acc, &k| acc.mul(&table[k as usize])))
    }

    fn map_terms(&self, f: impl Fn(&Partition, &RatFunc) -> RatFunc) -> SymFunc {
        let mut out = SymFunc::zero(self.cap);
        for (m, c) in &self.coeffs {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }

    /// Scalar specialization `p_k ↦ f(k)`.
    pub fn specialize(&self, f: impl Fn(u32) -> RatFunc) -> RatFunc {
        let table: Vec<RatFunc> = (0..=self.cap).map(|k| if k == 0 { RatFunc::one() } else { f(k) }).collect();
        let terms: Vec<RatFunc> = self
            .coeffs
            .iter()
            .map(|(mu, c)| mu.parts().iter().fold(c.clone(), |acc, &k| acc.mul(&table[k as usize])))
            .collect();
        sum_balanced(terms)
    }

    /// `F[1]`.
    pub fn at_one(&self) -> RatFunc {
        self.specialize(|_| RatFunc::one())
    }

    /// `F[-1]`, i.e. `p_k ↦ -1`.
    pub fn at_minus_one(&self) -> RatFunc {
        self.specialize(|_| RatFunc::from_int(-1))
    }

    /// `F[X]` for a series alphabet `X`: `p_n ↦ adams(n, X)`.
    pub fn pleth_eval(&self, x: &MultiSeries<RatFunc>) -> Result<MultiSeries<RatFunc>> {
        PowerSumTable::new(x, self.max_degree().unwrap_or(0))?.eval(self)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<SymTermJson> = self
            .coeffs
            .iter()
            .map(|(mu, c)| SymTermJson { mu: mu.parts().to_vec(), num: c.numerator().to_string(), den: c.denominator().to_string() })
            .collect();
        serde_json::to_value(rows).expect("symmetric function serializes")
    }

    pub fn from_json_value(v: &serde_json::Value, cap: u32) -> Result<SymFunc> {
        let rows: Vec<SymTermJson> = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = SymFunc::zero(cap);
        for r in rows {
            let c = RatFunc::new(&TLaurent::parse(&r.num)?, &TLaurent::parse(&r.den)?)?;
            out.add_term(Partition::new(r.mu), c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SymTermJson {
    mu: Vec<u32>,
    num: String,
    den: String,
}

/// Precomputed `p_μ[X]` for all `|μ| ≤ d`, shared across many evaluations.
pub struct PowerSumTable {
    zero: MultiSeries<RatFunc>,
    values: BTreeMap<Partition, MultiSeries<RatFunc>>,
}

impl PowerSumTable {
    pub fn new(x: &MultiSeries<RatFunc>, d: u32) -> Result<Self> {
        let adams: Vec<MultiSeries<RatFunc>> = (0..=d).map(|n| if n == 0 { x.one_like() } else { x.adams(n) }).collect();
        let mut values: BTreeMap<Partition, MultiSeries<RatFunc>> = BTreeMap::new();
        values.insert(Partition::empty(), x.one_like());
        for n in 1..=d {
            for mu in enumerate(n) {
                // p_μ = p_{μ minus its last part} · p_{last part}
                let parts = mu.parts();
                let last = *parts.last().unwrap();
                let rest = Partition::new(parts[..parts.len() - 1].to_vec());
                let v = values[&rest].mul(&adams[last as usize])?;
                values.insert(mu, v);
            }
        }
        Ok(PowerSumTable { zero: x.zero_like(), values })
    }

    pub fn get(&self, mu: &Partition) -> Option<&MultiSeries<RatFunc>> {
        self.values.get(mu)
    }

    pub fn eval(&self, f: &SymFunc) -> Result<MultiSeries<RatFunc>> {
        let mut acc: BTreeMap<Vec<u32>, Vec<RatFunc>> = BTreeMap::new();
        for (mu, c) in f.terms() {
            let v = self.values.get(mu).ok_or_else(|| Error::InsufficientTruncation(format!("power sum {mu} not tabulated")))?;
            for (e, x) in v.terms() {
                acc.entry(e.clone()).or_default().push(x.mul(c));
            }
        }
        let mut out = self.zero.clone();
        for (e, cs) in acc {
            out.add_term(e, sum_balanced(cs));
        }
        Ok(out)
    }
}

/// `⟨p_λ, p_μ⟩ = δ z_λ Π (1 - Q^{λ_i}) / (1 - T^{λ_i})`.
pub fn qt_norm(mu: &Partition, q: TMonomial, t: TMonomial) -> RatFunc {
    let z = RatFunc::constant(Rational::from_integer(mu.z_lambda()));
    mu.parts().iter().fold(z, |acc, &k| {
        let k = k as i64;
        acc.mul(&one_minus(q.pow(k))).div(&one_minus(t.pow(k))).expect("nonzero")
    })
}

pub fn qt_inner(f: &SymFunc, g: &SymFunc, q: TMonomial, t: TMonomial) -> RatFunc {
    diagonal_pairing(f, g, |mu| qt_norm(mu, q, t))
}

/// `⟨p_λ, p_μ⟩∗ = δ (-1)^{ℓ(λ)} z_λ Π (1 - t1^{λ_i})(1 - t2^{λ_i})`.
pub fn star_norm(mu: &Partition) -> RatFunc {
    let sign = if mu.len().is_multiple_of(2) { 1 } else { -1 };
    let z = Rational::from_integer(mu.z_lambda()) * rat(sign);
    let l = mu.parts().iter().fold(TLaurent::constant(z), |acc, &k| {
        let k = k as i64;
        acc.mul(&TLaurent::one_minus(TMonomial::new(k, 0))).mul(&TLaurent::one_minus(TMonomial::new(0, k)))
    });
    RatFunc::from_laurent(&l)
}

pub fn star_inner(f: &SymFunc, g: &SymFunc) -> RatFunc {
    diagonal_pairing(f, g, star_norm)
}

/// Bilinear pairing that is diagonal on power sums with the given norms.
pub fn diagonal_pairing(f: &SymFunc, g: &SymFunc, norm: impl Fn(&Partition) -> RatFunc) -> RatFunc {
    let (small, large) = if f.coeffs.len() <= g.coeffs.len() { (f, g) } else { (g, f) };
    let terms: Vec<RatFunc> = small
        .coeffs
        .iter()
        .filter_map(|(mu, a)| large.coeffs.get(mu).map(|b| a.mul(b).mul(&norm(mu))))
        .collect();
    sum_balanced(terms)
}

/// `(UF)[X] = F[1 + X]`: each `p_n ↦ 1 + p_n`.
pub fn op_u(f: &SymFunc) -> SymFunc {
    let mut out = SymFunc::zero(f.cap);
    for (mu, c) in f.terms() {
        let parts = mu.parts();
        for mask in 0u32..(1 << parts.len()) {
            let sub: Vec<u32> = parts.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &k)| k).collect();
            out.add_term(Partition::new(sub), c.clone());
        }
    }
    out
}

/// `Exp[X·A]` where `p_n[A] = a(n)`, truncated at `cap`.
pub fn sym_exp(a: impl Fn(u32) -> RatFunc, cap: u32) -> SymFunc {
    // exp(Σ a_n p_n / n) = Σ_μ p_μ Π a_{μ_i} / z_μ
    let a: Vec<RatFunc> = (0..=cap).map(|n| if n == 0 { RatFunc::one() } else { a(n) }).collect();
    let mut out = SymFunc::zero(cap);
    for n in 0..=cap {
        for mu in enumerate(n) {
            let z = Rational::from_integer(mu.z_lambda()).recip();
            let c = mu.parts().iter().fold(RatFunc::constant(z), |acc, &k| acc.mul(&a[k as usize]));
            out.add_term(mu, c);
        }
    }
    out
}

/// `Exp[-X/M]` with `M = (1 - t1)(1 - t2)`, truncated at `cap`.
pub fn ustar_kernel(cap: u32) -> SymFunc {
    sym_exp(
        |n| {
            let n = n as i64;
            let m = TLaurent::one_minus(TMonomial::new(n, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, n)));
            RatFunc::new(&TLaurent::from_int(-1), &m).unwrap()
        },
        cap,
    )
}

/// `(U*F)[X] = Exp[-X/M]·F[X]`.
pub fn op_ustar(f: &SymFunc) -> SymFunc {
    ustar_kernel(f.cap).mul(f)
}

/// Count maps from the parts of `mu` onto the rows of `lam` with matching sums.
fn transition_count(mu: &[u32], rows: &mut Vec<u32>) -> u64 {
    match mu.split_first() {
        None => rows.iter().all(|&r| r == 0) as u64,
        Some((&k, rest)) => {
            let mut total = 0;
            for j in 0..rows.len() {
                if rows[j] >= k {
                    rows[j] -= k;
                    total += transition_count(rest, rows);
                    rows[j] += k;
                }
            }
            total
        }
    }
}

/// Matrix `R` with `p_μ = Σ_λ R[μ][λ] m_λ`, indexed by `enumerate(n)`.
pub fn p_to_m_matrix(n: u32) -> Vec<Vec<Rational>> {
    let parts = enumerate(n);
    parts
        .iter()
        .map(|mu| {
            parts
                .iter()
                .map(|lam| {
                    let mut rows = lam.parts().to_vec();
                    Rational::from_integer(transition_count(mu.parts(), &mut rows).into())
                })
                .collect()
        })
        .collect()
}

pub fn invert(a: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("invertible matrix");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Matrix `S` with `m_λ = Σ_μ S[λ][μ] p_μ`, cached per degree.
pub fn m_to_p_matrix(n: u32) -> Vec<Vec<Rational>> {
    static CACHE: OnceLock<std::sync::Mutex<BTreeMap<u32, Vec<Vec<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(&n) {
        return m.clone();
    }
    let m = invert(&p_to_m_matrix(n));
    cache.lock().unwrap().insert(n, m.clone());
    m
}

/// Monomial-basis coefficients of `F`.
pub fn basis_p_to_m(f: &SymFunc) -> BTreeMap<Partition, RatFunc> {
    let mut out: BTreeMap<Partition, RatFunc> = BTreeMap::new();
    for n in 0..=f.max_degree().unwrap_or(0) {
        let parts = enumerate(n);
        let r = p_to_m_matrix(n);
        for (i, mu) in parts.iter().enumerate() {
            let c = f.coeff(mu);
            if c.is_zero() {
                continue;
            }
            for (j, lam) in parts.iter().enumerate() {
                if !r[i][j].is_zero() {
                    let slot = out.entry(lam.clone()).or_default();
                    *slot = slot.add(&c.scale_by(&r[i][j]));
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Power-sum expansion of `Σ_λ c_λ m_λ`.
pub fn basis_m_to_p(m: &BTreeMap<Partition, RatFunc>, cap: u32) -> SymFunc {
    let mut out = SymFunc::zero(cap);
    for n in 0..=cap {
        let parts = enumerate(n);
        let s = m_to_p_matrix(n);
        for (i, lam) in parts.iter().enumerate() {
            let Some(c) = m.get(lam) else { continue };
            for (j, mu) in parts.iter().enumerate() {
                if !s[i][j].is_zero() {
                    out.add_term(mu.clone(), c.scale_by(&s[i][j]));
                }
            }
        }
    }
    out
}

/// `m_λ` in the power-sum basis.
pub fn monomial_sym(lam: &Partition, cap: u32) -> SymFunc {
    let mut m = BTreeMap::new();
    m.insert(lam.clone(), RatFunc::one());
    basis_m_to_p(&m, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Truncation;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn ps(v: &[u32], cap: u32) -> SymFunc {
        SymFunc::power_sum(p(v), cap)
    }

    fn x_alphabet(cap: u32, c: &[(u32, TLaurent)]) -> MultiSeries<RatFunc> {
        let mut s = MultiSeries::zero(vec!["x".into()], Truncation::per_variable(vec![cap]));
        for (e, l) in c {
            s.add_term(vec![*e], RatFunc::from_laurent(l));
        }
        s
    }

    #[test]
    fn pleth_eval_examples() {
        let u = TLaurent::monomial(1, 1);
        // X = 1 - x u
        let x = x_alphabet(4, &[(0, TLaurent::one()), (1, u.neg())]);
        let r = ps(&[2], 4).pleth_eval(&x).unwrap();
        assert_eq!(r, x_alphabet(4, &[(0, TLaurent::one()), (2, u.pow(2).neg())]));
        let q = x_alphabet(4, &[(1, TLaurent::one())]);
        assert_eq!(ps(&[1, 1], 4).pleth_eval(&q).unwrap(), x_alphabet(4, &[(2, TLaurent::one())]));
    }

    #[test]
    fn transition_examples() {
        // p2 = m2, p11 = m2 + 2 m11
        let r = p_to_m_matrix(2);
        assert_eq!(r, vec![vec![rat(1), rat(0)], vec![rat(1), rat(2)]]);
        let m11 = monomial_sym(&p(&[1, 1]), 2);
        let expect = ps(&[1, 1], 2).sub(&ps(&[2], 2)).map_coeffs(|c| c.scale_by(&crate::algebra::rational::rat_frac(1, 2)));
        assert_eq!(m11, expect);
        for n in 0..=6 {
            let a = p_to_m_matrix(n);
            let b = m_to_p_matrix(n);
            for (i, row) in a.iter().enumerate() {
                for j in 0..row.len() {
                    let s: Rational = row.iter().zip(&b).map(|(x, bk)| x * &bk[j]).sum();
                    assert_eq!(s, if i == j { rat(1) } else { rat(0) });
                }
            }
        }
    }

    #[test]
    fn basis_round_trip() {
        let f = ps(&[2, 1], 4).add(&ps(&[3], 4)).add(&ps(&[1], 4));
        assert_eq!(basis_m_to_p(&basis_p_to_m(&f), 4), f);
    }

    #[test]
    fn qt_inner_examples() {
        let q = TMonomial::new(0, 1);
        let t = TMonomial::new(1, 0);
        let r = |a: &str, b: &str| RatFunc::new(&TLaurent::parse(a).unwrap(), &TLaurent::parse(b).unwrap()).unwrap();
        assert_eq!(qt_inner(&ps(&[1], 2), &ps(&[1], 2), q, t), r("1 - t2", "1 - t1"));
        assert!(qt_inner(&ps(&[2], 2), &ps(&[1, 1], 2), q, t).is_zero());
        let one = r("1 - t2", "1 - t1");
        assert_eq!(qt_inner(&ps(&[1, 1], 2), &ps(&[1, 1], 2), q, t), one.mul(&one).scale_by(&rat(2)));
    }

    #[test]
    fn star_norm_degree_one() {
        let expect = TLaurent::parse("1 - t1").unwrap().mul(&TLaurent::parse("1 - t2").unwrap()).neg();
        assert_eq!(star_inner(&ps(&[1], 1), &ps(&[1], 1)), RatFunc::from_laurent(&expect));
    }

    #[test]
    fn u_examples() {
        assert_eq!(op_u(&SymFunc::one(3)), SymFunc::one(3));
        assert_eq!(op_u(&ps(&[1], 3)), SymFunc::one(3).add(&ps(&[1], 3)));
        let expect = SymFunc::one(3).add(&ps(&[2], 3)).mul(&SymFunc::one(3).add(&ps(&[1], 3)));
        assert_eq!(op_u(&ps(&[2, 1], 3)), expect);
    }

    #[test]
    fn ustar_low_degrees() {
        let k = op_ustar(&SymFunc::one(3));
        assert!(k.coeff(&Partition::empty()).is_one());
        let m = TLaurent::parse("1 - t1").unwrap().mul(&TLaurent::parse("1 - t2").unwrap());
        assert_eq!(k.coeff(&p(&[1])), RatFunc::new(&TLaurent::from_int(-1), &m).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let f = ps(&[2, 1], 4).scale(&RatFunc::new(&TLaurent::parse("t1").unwrap(), &TLaurent::parse("1 - t2").unwrap()).unwrap());
        let v = f.to_json_value();
        assert_eq!(SymFunc::from_json_value(&v, 4).unwrap(), f);
    }
}
