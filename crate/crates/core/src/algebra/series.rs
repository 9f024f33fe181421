//! Truncated power series in a list of variables (`q, m1, ..., ml`).
//!
//! The truncation is an order ideal: per-variable maxima plus any number of
//! total-degree caps over subsets of the variables. Products are truncated
//! eagerly. Coefficients are stored sparsely; absent means zero.

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::coeff::Coefficient;
use super::laurent::TLaurent;
use super::rational::{rat, Rational};
use crate::error::{Error, Result};

pub type Exponent = Vec<u32>;

/// A total-degree bound `Σ_{i ∈ vars} e_i ≤ cap`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TotalCap {
    pub vars: Vec<usize>,
    pub cap: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub max: Vec<u32>,
    pub caps: Vec<TotalCap>,
}

impl Truncation {
    pub fn per_variable(max: Vec<u32>) -> Self {
        Truncation { max, caps: Vec::new() }
    }

    /// Per-variable maxima plus a total cap on the listed variables.
    pub fn with_cap(mut self, vars: Vec<usize>, cap: u32) -> Self {
        self.caps.push(TotalCap { vars, cap });
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        let mut best: BTreeMap<Vec<usize>, u32> = BTreeMap::new();
        for c in self.caps.drain(..) {
            let mut vars = c.vars;
            vars.sort_unstable();
            vars.dedup();
            let slot = best.entry(vars).or_insert(c.cap);
            *slot = (*slot).min(c.cap);
        }
        self.caps = best.into_iter().map(|(vars, cap)| TotalCap { vars, cap }).collect();
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.max).all(|(a, b)| a <= b)
            && self.caps.iter().all(|c| c.vars.iter().map(|&i| e[i]).sum::<u32>() <= c.cap)
    }

    pub fn merge(&self, o: &Truncation) -> Truncation {
        let max = self.max.iter().zip(&o.max).map(|(a, b)| *a.min(b)).collect();
        let mut t = Truncation { max, caps: self.caps.iter().chain(&o.caps).cloned().collect() };
        t.normalize();
        t
    }

    /// Largest total degree of an admissible exponent.
    pub fn max_total_degree(&self) -> u32 {
        let mut best: u32 = self.max.iter().sum();
        for c in &self.caps {
            let outside: u32 = (0..self.max.len()).filter(|i| !c.vars.contains(i)).map(|i| self.max[i]).sum();
            let inside: u32 = c.vars.iter().map(|&i| self.max[i]).sum();
            best = best.min(outside + inside.min(c.cap));
        }
        best
    }

    /// All admissible exponents in lexicographic order.
    pub fn exponents(&self) -> Vec<Exponent> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.max.len()];
        self.walk(0, &mut cur, &mut out);
        out
    }

    fn walk(&self, i: usize, cur: &mut Vec<u32>, out: &mut Vec<Exponent>) {
        if i == self.max.len() {
            if self.contains(cur) {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=self.max[i] {
            cur[i] = k;
            if !self.partial_ok(cur, i) {
                break;
            }
            self.walk(i + 1, cur, out);
        }
        cur[i] = 0;
    }

    fn partial_ok(&self, cur: &[u32], upto: usize) -> bool {
        self.caps
            .iter()
            .all(|c| c.vars.iter().filter(|&&v| v <= upto).map(|&v| cur[v]).sum::<u32>() <= c.cap)
    }

    /// Drop variable `i`, keeping caps restricted to the rest.
    fn remove_var(&self, i: usize) -> Truncation {
        let mut max = self.max.clone();
        max.remove(i);
        let caps = self
            .caps
            .iter()
            .map(|c| TotalCap {
                vars: c.vars.iter().filter(|&&v| v != i).map(|&v| if v > i { v - 1 } else { v }).collect(),
                cap: c.cap,
            })
            .filter(|c| !c.vars.is_empty())
            .collect();
        let mut t = Truncation { max, caps };
        t.normalize();
        t
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiSeries<C: Coefficient> {
    vars: Vec<String>,
    trunc: Truncation,
    coeffs: BTreeMap<Exponent, C>,
}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl<C: Coefficient> MultiSeries<C> {
    pub fn zero(vars: Vec<String>, trunc: Truncation) -> Self {
        assert_eq!(vars.len(), trunc.max.len(), "truncation arity");
        MultiSeries { vars, trunc, coeffs: BTreeMap::new() }
    }

    pub fn constant(vars: Vec<String>, trunc: Truncation, c: C) -> Self {
        let n = vars.len();
        let mut s = MultiSeries::zero(vars, trunc);
        s.add_term(vec![0; n], c);
        s
    }

    pub fn one(vars: Vec<String>, trunc: Truncation) -> Self {
        MultiSeries::constant(vars, trunc, C::one())
    }

    pub fn monomial(vars: Vec<String>, trunc: Truncation, e: Exponent, c: C) -> Self {
        let mut s = MultiSeries::zero(vars, trunc);
        s.add_term(e, c);
        s
    }

    pub fn zero_like(&self) -> Self {
        MultiSeries::zero(self.vars.clone(), self.trunc.clone())
    }

    pub fn one_like(&self) -> Self {
        MultiSeries::one(self.vars.clone(), self.trunc.clone())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> C {
        self.coeffs.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Add `c·x^e`; silently dropped outside the truncation.
    pub fn add_term(&mut self, e: Exponent, c: C) {
        if c.is_zero() || !self.trunc.contains(&e) {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if self.vars != o.vars {
            return Err(Error::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    /// Re-truncate to the intersection of both truncations.
    pub fn truncate_to(&self, t: &Truncation) -> Self {
        let trunc = self.trunc.merge(t);
        let coeffs = self.coeffs.iter().filter(|(e, _)| trunc.contains(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        MultiSeries { vars: self.vars.clone(), trunc, coeffs }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let trunc = self.trunc.merge(&o.trunc);
        let mut out = MultiSeries::zero(self.vars.clone(), trunc);
        for (e, c) in self.coeffs.iter().chain(&o.coeffs) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn mul_coeff(&self, k: &C) -> Self {
        self.map_coeffs(|c| c.mul(k))
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(e, c)| {
                let v = f(c);
                (!v.is_zero()).then(|| (e.clone(), v))
            })
            .collect();
        MultiSeries { vars: self.vars.clone(), trunc: self.trunc.clone(), coeffs }
    }

    /// Change coefficient ring.
    pub fn convert<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> MultiSeries<D> {
        let mut out = MultiSeries::zero(self.vars.clone(), self.trunc.clone());
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn try_convert<D: Coefficient>(&self, f: impl Fn(&C) -> Result<D>) -> Result<MultiSeries<D>> {
        let mut out = MultiSeries::zero(self.vars.clone(), self.trunc.clone());
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let trunc = self.trunc.merge(&o.trunc);
        let mut acc: BTreeMap<Exponent, Vec<C>> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            if !trunc.contains(ea) {
                continue;
            }
            for (eb, cb) in &o.coeffs {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                if trunc.contains(&e) {
                    acc.entry(e).or_default().push(ca.mul(cb));
                }
            }
        }
        let mut out = MultiSeries::zero(self.vars.clone(), trunc);
        for (e, cs) in acc {
            out.add_term(e, sum_balanced(cs));
        }
        Ok(out)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.pow(-n);
        }
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Every variable and every torus weight raised to the `n`-th power.
    pub fn adams(&self, n: u32) -> Self {
        let mut out = self.zero_like();
        for (e, c) in &self.coeffs {
            let e2: Exponent = e.iter().map(|k| k * n).collect();
            if self.trunc.contains(&e2) {
                out.add_term(e2, c.adams(n));
            }
        }
        out
    }

    fn graded(&self) -> Vec<Self> {
        let d = self.trunc.max_total_degree() as usize;
        let mut parts = vec![self.zero_like(); d + 1];
        for (e, c) in &self.coeffs {
            parts[total(e) as usize].coeffs.insert(e.clone(), c.clone());
        }
        parts
    }

    fn assemble_graded(&self, parts: Vec<Self>) -> Self {
        let mut out = self.zero_like();
        for p in parts {
            out.coeffs.extend(p.coeffs);
        }
        out
    }

    /// `exp(F)` for `F` with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let f = self.graded();
        let d = f.len() - 1;
        let mut e = vec![self.one_like()];
        for k in 1..=d {
            let mut acc = self.zero_like();
            for j in 1..=k {
                if f[j].is_zero() || e[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&f[j].mul(&e[k - j])?.scale(&rat(j as i64)))?;
            }
            e.push(acc.scale(&Rational::new(One::one(), (k as i64).into())));
        }
        Ok(self.assemble_graded(e))
    }

    /// `log(F)` for `F` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if self.constant_term() != C::one() {
            return Err(Error::NotUnit("logarithm needs constant term 1".into()));
        }
        let f = self.graded();
        let d = f.len() - 1;
        let mut l = vec![self.zero_like()];
        for k in 1..=d {
            let mut acc = f[k].scale(&rat(k as i64));
            for j in 1..k {
                if l[j].is_zero() || f[k - j].is_zero() {
                    continue;
                }
                acc = acc.sub(&l[j].mul(&f[k - j])?.scale(&rat(j as i64)))?;
            }
            l.push(acc.scale(&Rational::new(One::one(), (k as i64).into())));
        }
        Ok(self.assemble_graded(l))
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<Self> {
        let c = self.constant_term();
        let ci = c.try_inverse().ok_or_else(|| Error::NotUnit(format!("constant term {c:?}")))?;
        let f = self.graded();
        let d = f.len() - 1;
        let mut g = vec![MultiSeries::constant(self.vars.clone(), self.trunc.clone(), ci.clone())];
        for k in 1..=d {
            let mut acc = self.zero_like();
            for j in 1..=k {
                if f[j].is_zero() || g[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&f[j].mul(&g[k - j])?)?;
            }
            g.push(acc.mul_coeff(&ci.neg()));
        }
        Ok(self.assemble_graded(g))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inverse()?)
    }

    /// Plethystic exponential `exp(Σ_n adams(n, X)/n)`.
    pub fn pleth_exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let d = self.trunc.max_total_degree();
        let mut arg = self.zero_like();
        for n in 1..=d.max(1) {
            let a = self.adams(n);
            if a.is_zero() {
                continue;
            }
            arg = arg.add(&a.scale(&Rational::new(One::one(), (n as i64).into())))?;
        }
        arg.exp()
    }

    /// Coefficient of `v^k` as a series in the remaining variables.
    pub fn extract(&self, var: usize, k: u32) -> Self {
        let mut vars = self.vars.clone();
        vars.remove(var);
        let mut out = MultiSeries::zero(vars, self.trunc.remove_var(var));
        for (e, c) in &self.coeffs {
            if e[var] == k {
                let mut e2 = e.clone();
                e2.remove(var);
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    /// Set variable `var` to 1, summing over its exponents.
    pub fn eval_var_one(&self, var: usize) -> Self {
        let mut vars = self.vars.clone();
        vars.remove(var);
        let mut out = MultiSeries::zero(vars, self.trunc.remove_var(var));
        for (e, c) in &self.coeffs {
            let mut e2 = e.clone();
            e2.remove(var);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Rename or reorder nothing; only replace the truncation by a looser
    /// one is forbidden, so this is a plain intersection.
    pub fn with_truncation(&self, t: Truncation) -> Self {
        self.truncate_to(&t)
    }

    /// Total degree of the highest nonzero term in variable `var`.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.coeffs.keys().map(|e| e[var]).max()
    }
}

/// Pairwise summation keeps intermediate rational functions small.
pub fn sum_balanced<C: Coefficient>(mut v: Vec<C>) -> C {
    if v.is_empty() {
        return C::zero();
    }
    while v.len() > 1 {
        let mut next = Vec::with_capacity(v.len().div_ceil(2));
        let mut it = v.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(a.add(&b)),
                None => next.push(a),
            }
        }
        v = next;
    }
    v.pop().unwrap()
}

#[derive(Serialize, Deserialize)]
struct CoeffJson {
    exp: Vec<u32>,
    num: String,
    den: String,
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    vars: Vec<String>,
    trunc: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    total: Vec<TotalCap>,
    coeffs: Vec<CoeffJson>,
}

impl<C: Coefficient> MultiSeries<C> {
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = SeriesJson {
            vars: self.vars.clone(),
            trunc: self.trunc.max.clone(),
            total: self.trunc.caps.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| {
                    let (n, d) = c.to_fraction();
                    CoeffJson { exp: e.clone(), num: n.to_string(), den: d.to_string() }
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("series serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("series serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let doc: SeriesJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(doc)
    }

    fn from_doc(doc: SeriesJson) -> Result<Self> {
        if doc.vars.len() != doc.trunc.len() {
            return Err(Error::Parse("vars and trunc differ in length".into()));
        }
        let n = doc.vars.len();
        if doc.total.iter().any(|c| c.vars.iter().any(|&v| v >= n)) {
            return Err(Error::Parse("total cap refers to unknown variable".into()));
        }
        let mut trunc = Truncation { max: doc.trunc, caps: doc.total };
        trunc.normalize();
        let mut out = MultiSeries::zero(doc.vars, trunc);
        for c in doc.coeffs {
            if c.exp.len() != n {
                return Err(Error::Parse("exponent arity".into()));
            }
            if !out.trunc.contains(&c.exp) {
                return Err(Error::Parse(format!("exponent {:?} outside truncation", c.exp)));
            }
            let v = C::from_fraction(&TLaurent::parse(&c.num)?, &TLaurent::parse(&c.den)?)?;
            out.add_term(c.exp, v);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::laurent::TMonomial;
    use crate::algebra::ratfunc::RatFunc;

    fn qvars() -> Vec<String> {
        vec!["q".into()]
    }

    fn q_series(cs: &[i64], n: u32) -> MultiSeries<Rational> {
        let mut s = MultiSeries::zero(qvars(), Truncation::per_variable(vec![n]));
        for (i, &c) in cs.iter().enumerate() {
            s.add_term(vec![i as u32], rat(c));
        }
        s
    }

    #[test]
    fn arithmetic_examples() {
        let a = q_series(&[1, 1], 2);
        let b = q_series(&[1, -1], 2);
        assert_eq!(a.mul(&b).unwrap(), q_series(&[1, 0, -1], 2));
        let z = a.zero_like();
        assert_eq!(a.add(&z).unwrap(), a);
        let geo = q_series(&[1; 6], 5);
        assert_eq!(geo.mul(&q_series(&[1, -1], 5)).unwrap(), q_series(&[1], 5));
    }

    #[test]
    fn variable_mismatch() {
        let a = q_series(&[1], 2);
        let b: MultiSeries<Rational> = MultiSeries::one(vec!["m1".into()], Truncation::per_variable(vec![2]));
        assert!(matches!(a.add(&b), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn pleth_exp_examples() {
        let q = q_series(&[0, 1], 6);
        assert_eq!(q.pleth_exp().unwrap(), q_series(&[1; 7], 6));
        assert!(q_series(&[1, 1], 6).pleth_exp().is_err());

        // Exp[-q u] = 1 - q u
        let u = TLaurent::monomial(1, -2);
        let mut x: MultiSeries<TLaurent> = MultiSeries::zero(qvars(), Truncation::per_variable(vec![5]));
        x.add_term(vec![1], u.neg());
        let e = x.pleth_exp().unwrap();
        let mut expect = x.one_like();
        expect.add_term(vec![1], u.neg());
        assert_eq!(e, expect);

        let m = RatFunc::new(&TLaurent::one(), &TLaurent::one_minus(TMonomial::new(1, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, 1)))).unwrap();
        let mut y: MultiSeries<RatFunc> = MultiSeries::zero(qvars(), Truncation::per_variable(vec![3]));
        y.add_term(vec![1], m.clone());
        assert_eq!(y.pleth_exp().unwrap().coeff(&[1]), m);
    }

    #[test]
    fn log_exp_inverse() {
        let vars = vec!["q".to_string(), "m1".to_string()];
        let t = Truncation::per_variable(vec![4, 3]).with_cap(vec![1], 2);
        let mut f: MultiSeries<Rational> = MultiSeries::zero(vars, t);
        f.add_term(vec![1, 0], rat(2));
        f.add_term(vec![0, 1], rat(-3));
        f.add_term(vec![2, 1], rat(5));
        let e = f.exp().unwrap();
        assert_eq!(e.log().unwrap(), f);
        let inv = e.inverse().unwrap();
        assert_eq!(inv.mul(&e).unwrap(), e.one_like());
        assert_eq!(e.pow(-2).unwrap().mul(&e.pow(2).unwrap()).unwrap(), e.one_like());
    }

    #[test]
    fn json_round_trip() {
        let vars = vec!["q".to_string(), "m1".to_string()];
        let t = Truncation::per_variable(vec![3, 2]).with_cap(vec![0, 1], 4);
        let mut s: MultiSeries<RatFunc> = MultiSeries::zero(vars, t);
        let f = RatFunc::new(&TLaurent::parse("3*t1^2*t2^-1 - 1").unwrap(), &TLaurent::parse("1 - t2").unwrap()).unwrap();
        s.add_term(vec![1, 1], f);
        s.add_term(vec![2, 0], RatFunc::from_int(-7));
        let j = s.to_json();
        let back = MultiSeries::<RatFunc>::from_json(&j).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), j);
    }

    #[test]
    fn truncation_enumeration() {
        let t = Truncation::per_variable(vec![2, 2, 2]).with_cap(vec![1, 2], 2);
        let all = t.exponents();
        assert_eq!(all.len(), 3 * 6);
        assert_eq!(t.max_total_degree(), 4);
    }
}
