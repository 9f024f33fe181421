//! Equivariant descendent series of the Hilbert schemes of points on `C^2`.
//!
//! Three independent routes compute the same series: the fixed-point sum,
//! the Macdonald-side formula, and a variant specialized to a line bundle in
//! the first slot. Extraction of the normalized coefficients `g_a` and the
//! line-bundle variant `g̃_ã` sits on top.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::series::{sum_balanced, Exponent};
use crate::algebra::{MonomialMap, MultiSeries, RatFunc, Rational, TLaurent, TMonomial, Truncation};
use crate::error::{Error, Result};
use crate::macdonald::{self, MacdonaldCache};
use crate::partitions::{enumerate_upto, Partition};
use crate::symfunc::PowerSumTable;

/// T-character of the fiber of a class at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqClassC2 {
    pub char0: TLaurent,
}

impl EqClassC2 {
    pub fn new(char0: TLaurent) -> Self {
        EqClassC2 { char0 }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(EqClassC2 { char0: TLaurent::parse(s)? })
    }
}

/// Truncation orders: `q ≤ q`, `Σ m_j ≤ m_total`, optionally `m_j ≤ m_each[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orders {
    pub q: u32,
    pub m_total: u32,
    pub m_each: Option<Vec<u32>>,
}

impl Orders {
    pub fn new(q: u32, m_total: u32) -> Self {
        Orders { q, m_total, m_each: None }
    }

    pub fn vars(l: usize) -> Vec<String> {
        std::iter::once("q".to_string()).chain((1..=l).map(|j| format!("m{j}"))).collect()
    }

    pub fn truncation(&self, l: usize) -> Truncation {
        let each: Vec<u32> = match &self.m_each {
            Some(v) => (0..l).map(|j| v.get(j).copied().unwrap_or(self.m_total).min(self.m_total)).collect(),
            None => vec![self.m_total; l],
        };
        let mut max = vec![self.q];
        max.extend(each);
        let t = Truncation::per_variable(max);
        if l > 1 {
            t.with_cap((1..=l).collect(), self.m_total)
        } else {
            t
        }
    }
}

/// How `C_λ`, `B_λ` and the class characters are specialized before summing.
/// `cell_map` acts on fixed-point data, `char_map` on the characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusSpec {
    pub cell_map: MonomialMap,
    pub char_map: MonomialMap,
}

impl TorusSpec {
    pub const IDENTITY: TorusSpec = TorusSpec { cell_map: MonomialMap::IDENTITY, char_map: MonomialMap::IDENTITY };
}

/// `1/((1 - t1)(1 - t2))`.
pub fn inv_m() -> RatFunc {
    let m = TLaurent::one_minus(TMonomial::new(1, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, 1)));
    RatFunc::new(&TLaurent::one(), &m).unwrap()
}

fn series(l: usize, orders: &Orders) -> MultiSeries<RatFunc> {
    MultiSeries::zero(Orders::vars(l), orders.truncation(l))
}

fn unit(l: usize, j: usize) -> Exponent {
    let mut e = vec![0; l + 1];
    e[j] = 1;
    e
}

/// Fixed-point sum `Σ_λ q^{|λ|}/C_λ · Exp[-(Σ m_j u_j)·B_λ]`.
pub fn zc2_localization(classes: &[EqClassC2], orders: &Orders) -> Result<MultiSeries<RatFunc>> {
    zc2_localization_with(classes, orders, &TorusSpec::IDENTITY)
}

pub fn zc2_localization_with(classes: &[EqClassC2], orders: &Orders, spec: &TorusSpec) -> Result<MultiSeries<RatFunc>> {
    let l = classes.len();
    let chars: Vec<TLaurent> = classes.iter().map(|c| c.char0.map_monomials(&spec.char_map)).collect();
    let trunc = orders.truncation(l);
    let vars = Orders::vars(l);
    let lambdas = enumerate_upto(orders.q);
    let pieces: Vec<(u32, TLaurent, MultiSeries<TLaurent>)> = lambdas
        .par_iter()
        .map(|lam| {
            let c = lam.c_lambda().map_monomials(&spec.cell_map);
            if c.is_zero() {
                return Err(Error::DegenerateDirection(spec.cell_map.t1.e1, spec.cell_map.t2.e1));
            }
            let b = lam.b_poly().map_monomials(&spec.cell_map);
            let mut arg: MultiSeries<TLaurent> = MultiSeries::zero(vars.clone(), trunc.clone());
            for (j, u) in chars.iter().enumerate() {
                arg.add_term(unit(l, j + 1), u.mul(&b).neg());
            }
            Ok((lam.size(), c, arg.pleth_exp()?))
        })
        .collect::<Result<_>>()?;
    let mut by_exp: BTreeMap<Exponent, Vec<RatFunc>> = BTreeMap::new();
    let mut terms: Vec<(Exponent, TLaurent, &TLaurent)> = Vec::new();
    for (n, c, e) in &pieces {
        for (exp, coeff) in e.terms() {
            let mut full = exp.clone();
            full[0] = *n;
            terms.push((full, coeff.clone(), c));
        }
    }
    let fractions: Vec<(Exponent, RatFunc)> = terms
        .into_par_iter()
        .map(|(e, num, den)| RatFunc::new(&num, den).map(|f| (e, f)))
        .collect::<Result<_>>()?;
    for (e, f) in fractions {
        by_exp.entry(e).or_default().push(f);
    }
    let sums: Vec<(Exponent, RatFunc)> = by_exp.into_par_iter().map(|(e, v)| (e, sum_balanced(v))).collect();
    let mut out = series(l, orders);
    for (e, f) in sums {
        out.add_term(e, f);
    }
    Ok(out)
}

/// `Y = Σ_{j ∈ slots} m_j u_j` as a series.
fn class_alphabet(classes: &[EqClassC2], slots: &[usize], orders: &Orders) -> MultiSeries<RatFunc> {
    let l = classes.len();
    let mut y = series(l, orders);
    for &j in slots {
        y.add_term(unit(l, j + 1), RatFunc::from_laurent(&classes[j].char0));
    }
    y
}

/// `Π_{cells} (1 - q w)` as a series.
fn q_cell_product(lam: &Partition, template: &MultiSeries<RatFunc>) -> Result<MultiSeries<RatFunc>> {
    let l = template.vars().len() - 1;
    let mut acc = template.one_like();
    for c in lam.cells() {
        let mut f = template.one_like();
        f.add_term(unit(l, 0), RatFunc::monomial(Partition::cell_weight(c)).neg());
        acc = acc.mul(&f)?;
    }
    Ok(acc)
}

/// Largest total degree in the `m` slots listed.
fn m_degree(orders: &Orders, l: usize, slots: &[usize]) -> u32 {
    let t = orders.truncation(l);
    let s: u32 = slots.iter().map(|&j| t.max[j + 1]).sum();
    s.min(orders.m_total)
}

/// Macdonald route: `Exp[(q - Y)/M] Σ_{|λ| ≤ A} H_λ[Y]/C_λ Π (1 - q t^c)`.
pub fn zc2_macdonald(classes: &[EqClassC2], orders: &Orders) -> Result<MultiSeries<RatFunc>> {
    zc2_macdonald_in(classes, orders, macdonald::global())
}

pub fn zc2_macdonald_in(classes: &[EqClassC2], orders: &Orders, cache: &MacdonaldCache) -> Result<MultiSeries<RatFunc>> {
    let l = classes.len();
    let slots: Vec<usize> = (0..l).collect();
    let a = m_degree(orders, l, &slots);
    let y = class_alphabet(classes, &slots, orders);
    let table = PowerSumTable::new(&y, a)?;
    let hs = cache.upto(a, a)?;
    let terms: Vec<MultiSeries<RatFunc>> = hs
        .par_iter()
        .map(|(lam, h)| {
            let hy = table.eval(h)?;
            let c = RatFunc::from_laurent(&lam.c_lambda()).inv()?;
            hy.mul(&q_cell_product(lam, &y)?).map(|s| s.mul_coeff(&c))
        })
        .collect::<Result<_>>()?;
    let sum = sum_series(&y, terms)?;
    let mut arg = y.neg();
    arg.add_term(unit(l, 0), RatFunc::one());
    let pref = arg.mul_coeff(&inv_m()).pleth_exp()?;
    pref.mul(&sum)
}

fn sum_series(template: &MultiSeries<RatFunc>, terms: Vec<MultiSeries<RatFunc>>) -> Result<MultiSeries<RatFunc>> {
    let mut acc: BTreeMap<Exponent, Vec<RatFunc>> = BTreeMap::new();
    for t in terms {
        for (e, c) in t.terms() {
            acc.entry(e.clone()).or_default().push(c.clone());
        }
    }
    let sums: Vec<(Exponent, RatFunc)> = acc.into_par_iter().map(|(e, v)| (e, sum_balanced(v))).collect();
    let mut out = template.zero_like();
    for (e, c) in sums {
        out.add_term(e, c);
    }
    Ok(out)
}

fn line_bundle_weight(classes: &[EqClassC2]) -> Result<TMonomial> {
    let first = classes.first().ok_or_else(|| Error::NotMonomial("no classes".into()))?;
    first.char0.as_unit_monomial().ok_or_else(|| Error::NotMonomial(first.char0.to_string()))
}

/// `Π_{cells} (1 - q w)/(1 - q m1 u1 w)` as a series.
fn lb_cell_product(lam: &Partition, u1: TMonomial, template: &MultiSeries<RatFunc>) -> Result<MultiSeries<RatFunc>> {
    let l = template.vars().len() - 1;
    let mut num = q_cell_product(lam, template)?;
    let mut qm = unit(l, 0);
    qm[1] = 1;
    for c in lam.cells() {
        let mut d = template.one_like();
        d.add_term(qm.clone(), RatFunc::monomial(u1.mul(Partition::cell_weight(c))).neg());
        num = num.mul(&d.inverse()?)?;
    }
    Ok(num)
}

/// Line-bundle route; `classes[0]` must have a monomial character `u1`.
pub fn zc2_linebundle(classes: &[EqClassC2], orders: &Orders) -> Result<MultiSeries<RatFunc>> {
    zc2_linebundle_in(classes, orders, macdonald::global())
}

pub fn zc2_linebundle_in(classes: &[EqClassC2], orders: &Orders, cache: &MacdonaldCache) -> Result<MultiSeries<RatFunc>> {
    let u1 = line_bundle_weight(classes)?;
    let l = classes.len();
    let rest: Vec<usize> = (1..l).collect();
    let a = m_degree(orders, l, &rest);
    let y = class_alphabet(classes, &rest, orders);
    let table = PowerSumTable::new(&y, a)?;
    let hs = cache.upto(a, a)?;
    let terms: Vec<MultiSeries<RatFunc>> = hs
        .par_iter()
        .map(|(lam, h)| {
            let hy = table.eval(h)?;
            let c = RatFunc::from_laurent(&lam.c_lambda()).inv()?;
            hy.mul(&lb_cell_product(lam, u1, &y)?).map(|s| s.mul_coeff(&c))
        })
        .collect::<Result<_>>()?;
    let sum = sum_series(&y, terms)?;
    let pref = lb_prefactor(u1, &y)?;
    let mut arg = y.neg().mul_coeff(&inv_m());
    arg = arg.truncate_to(y.truncation());
    pref.mul(&arg.pleth_exp()?)?.mul(&sum)
}

/// `Exp[(q - q m1 u1)/M]`.
fn lb_prefactor(u1: TMonomial, template: &MultiSeries<RatFunc>) -> Result<MultiSeries<RatFunc>> {
    let l = template.vars().len() - 1;
    let mut arg = template.zero_like();
    arg.add_term(unit(l, 0), inv_m());
    let mut qm = unit(l, 0);
    qm[1] = 1;
    arg.add_term(qm, inv_m().mul(&RatFunc::monomial(u1)).neg());
    arg.pleth_exp()
}

/// `Exp[q/M]` with the truncation of `template`.
fn q_prefactor(template: &MultiSeries<RatFunc>) -> Result<MultiSeries<RatFunc>> {
    let l = template.vars().len() - 1;
    let mut arg = template.zero_like();
    arg.add_term(unit(l, 0), inv_m());
    arg.pleth_exp()
}

/// The normalized coefficient `g_a(q)` and the checks run on it.
#[derive(Clone, Debug, PartialEq)]
pub struct DescendentExtraction {
    pub a: Vec<u32>,
    pub g: MultiSeries<RatFunc>,
    pub degree_bound_ok: bool,
    pub polynomiality_ok: bool,
}

impl DescendentExtraction {
    pub fn degree(&self) -> Option<u32> {
        self.g.degree_in(0)
    }
}

/// Divide by `Exp[q/M]` and read the `m^a` coefficient as a `q`-series.
pub fn extract_g(z: &MultiSeries<RatFunc>, a: &[u32]) -> Result<DescendentExtraction> {
    let l = z.vars().len() - 1;
    if a.len() != l {
        return Err(Error::VariableMismatch(format!("exponent of length {} for {l} classes", a.len())));
    }
    let size: u32 = a.iter().sum();
    let t = z.truncation();
    if t.max[0] < size + 2 {
        return Err(Error::InsufficientTruncation(format!("q-order {} < {}", t.max[0], size + 2)));
    }
    let mut probe = vec![0];
    probe.extend_from_slice(a);
    if !t.contains(&probe) {
        return Err(Error::InsufficientTruncation(format!("m-exponent {a:?} outside truncation")));
    }
    let w = z.div(&q_prefactor(z)?)?;
    let mut g = w;
    for _ in 0..l {
        let k = a[g.vars().len() - 2];
        g = g.extract(g.vars().len() - 1, k);
    }
    let degree_bound_ok = g.degree_in(0).is_none_or(|d| d <= size);
    let polynomiality_ok = g.terms().all(|(e, _)| e[0] <= size) && g.truncation().max[0] > size;
    Ok(DescendentExtraction { a: a.to_vec(), g, degree_bound_ok, polynomiality_ok })
}

/// One summand `coeff · Π (1 - q w)/(1 - q m1 w')` of a rationality certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateTerm {
    pub partition: Vec<u32>,
    #[serde(serialize_with = "ser_ratfunc")]
    pub coeff: RatFunc,
    pub num_weights: Vec<(i64, i64)>,
    pub den_weights: Vec<(i64, i64)>,
}

fn ser_ratfunc<S: serde::Serializer>(f: &RatFunc, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.to_string())
}

/// Finite rational expression for `g̃_ã(q, m1)` checked against the series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalityCertificate {
    pub a_tilde: Vec<u32>,
    pub terms: Vec<CertificateTerm>,
    /// `(q, m1)` orders through which the expansion was compared.
    pub matched_order: (u32, u32),
    pub denominators_binomial: bool,
}

impl RationalityCertificate {
    /// Expansion of the certificate in `q, m1`.
    pub fn expand(&self, trunc: &Truncation) -> Result<MultiSeries<RatFunc>> {
        let vars = vec!["q".to_string(), "m1".to_string()];
        let mut out = MultiSeries::zero(vars.clone(), trunc.clone());
        for t in &self.terms {
            let mut s = MultiSeries::constant(vars.clone(), trunc.clone(), t.coeff.clone());
            for &(a, b) in &t.num_weights {
                let mut f = s.one_like();
                f.add_term(vec![1, 0], RatFunc::monomial(TMonomial::new(a, b)).neg());
                s = s.mul(&f)?;
            }
            for &(a, b) in &t.den_weights {
                let mut f = s.one_like();
                f.add_term(vec![1, 1], RatFunc::monomial(TMonomial::new(a, b)).neg());
                s = s.mul(&f.inverse()?)?;
            }
            out = out.add(&s)?;
        }
        Ok(out)
    }
}

/// True when `f`'s reduced denominator divides `Π (1 - t^w)` over `weights`.
fn divides_binomials(f: &RatFunc, weights: &[TMonomial]) -> bool {
    let prod = weights.iter().fold(TLaurent::one(), |acc, &w| acc.mul(&TLaurent::one_minus(w)));
    RatFunc::new(&prod, &f.denominator()).map(|r| r.is_laurent()).unwrap_or(false)
}

/// Extract `g̃_ã` from `z` and certify it against the finite Macdonald sum.
pub fn extract_gtilde(z: &MultiSeries<RatFunc>, classes: &[EqClassC2], a_tilde: &[u32]) -> Result<RationalityCertificate> {
    extract_gtilde_in(z, classes, a_tilde, macdonald::global())
}

pub fn extract_gtilde_in(
    z: &MultiSeries<RatFunc>,
    classes: &[EqClassC2],
    a_tilde: &[u32],
    cache: &MacdonaldCache,
) -> Result<RationalityCertificate> {
    let u1 = line_bundle_weight(classes)?;
    let l = classes.len();
    if a_tilde.len() + 1 != l || z.vars().len() != l + 1 {
        return Err(Error::VariableMismatch(format!("ã of length {} for {l} classes", a_tilde.len())));
    }
    let observed = {
        let w = z.div(&lb_prefactor(u1, z)?)?;
        let mut g = w;
        for j in (2..=l).rev() {
            g = g.extract(j, a_tilde[j - 2]);
        }
        g
    };
    let trunc = observed.truncation().clone();

    // R_λ = [m^ã] Exp[-Y'/M]·H_λ[Y'] with Y' = Σ_{j≥2} m_j u_j in m2..ml only
    let size: u32 = a_tilde.iter().sum();
    let rest_vars: Vec<String> = (2..=l).map(|j| format!("m{j}")).collect();
    let rest_trunc = Truncation::per_variable(a_tilde.to_vec());
    let mut y: MultiSeries<RatFunc> = MultiSeries::zero(rest_vars, rest_trunc);
    for j in 1..l {
        let mut e = vec![0; l - 1];
        e[j - 1] = 1;
        y.add_term(e, RatFunc::from_laurent(&classes[j].char0));
    }
    let pref = y.neg().mul_coeff(&inv_m()).pleth_exp()?;
    let table = PowerSumTable::new(&y, size)?;
    let mut terms = Vec::new();
    let mut binomial = true;
    for (lam, h) in cache.upto(size, size)? {
        let r = pref.mul(&table.eval(&h)?)?.coeff(a_tilde);
        if r.is_zero() {
            continue;
        }
        let coeff = r.div(&RatFunc::from_laurent(&lam.c_lambda()))?;
        let mut allowed = lam.tangent_weights();
        for k in 1..=size.max(1) as i64 {
            allowed.push(TMonomial::new(k, 0));
            allowed.push(TMonomial::new(0, k));
        }
        binomial &= divides_binomials(&coeff, &allowed);
        let w: Vec<TMonomial> = lam.cells().map(Partition::cell_weight).collect();
        terms.push(CertificateTerm {
            partition: lam.parts().to_vec(),
            coeff,
            num_weights: w.iter().map(|m| (m.e1, m.e2)).collect(),
            den_weights: w.iter().map(|m| u1.mul(*m)).map(|m| (m.e1, m.e2)).collect(),
        });
    }
    let cert = RationalityCertificate { a_tilde: a_tilde.to_vec(), terms, matched_order: (trunc.max[0], trunc.max[1]), denominators_binomial: binomial };
    let expanded = cert.expand(&trunc)?;
    if expanded != observed {
        let diff = expanded.sub(&observed)?;
        let first = diff.terms().next().map(|(e, _)| e.clone());
        return Err(Error::CertificateMismatch(format!("first differing coefficient at {first:?}")));
    }
    Ok(cert)
}

/// `Exp[Y/M] Σ_{|λ| ≤ d} H_λ[X]/C_λ · Exp[-Y·B_λ]` for series alphabets.
pub fn macid(x: &MultiSeries<RatFunc>, y: &MultiSeries<RatFunc>, d: u32, cache: &MacdonaldCache) -> Result<MultiSeries<RatFunc>> {
    let table = PowerSumTable::new(x, d)?;
    let hs = cache.upto(d, d)?;
    let terms: Vec<MultiSeries<RatFunc>> = hs
        .par_iter()
        .map(|(lam, h)| {
            let hx = table.eval(h)?;
            let b = RatFunc::from_laurent(&lam.b_poly());
            let e = y.mul_coeff(&b).neg().pleth_exp()?;
            let c = RatFunc::from_laurent(&lam.c_lambda()).inv()?;
            hx.mul(&e).map(|s| s.mul_coeff(&c))
        })
        .collect::<Result<_>>()?;
    let sum = sum_series(x, terms)?;
    y.mul_coeff(&inv_m()).pleth_exp()?.mul(&sum)
}

/// Both sides of the exchange symmetry with `X = q`, `Y = Σ m_j u_j`,
/// truncated at total degree `d` in all variables.
pub fn symmetry_sides(classes: &[EqClassC2], d: u32, cache: &MacdonaldCache) -> Result<(MultiSeries<RatFunc>, MultiSeries<RatFunc>)> {
    let l = classes.len();
    let orders = Orders::new(d, d);
    let trunc = orders.truncation(l).with_cap((0..=l).collect(), d);
    let mut x = MultiSeries::zero(Orders::vars(l), trunc.clone());
    x.add_term(unit(l, 0), RatFunc::one());
    let mut y = MultiSeries::zero(Orders::vars(l), trunc);
    for (j, c) in classes.iter().enumerate() {
        y.add_term(unit(l, j + 1), RatFunc::from_laurent(&c.char0));
    }
    Ok((macid(&x, &y, d, cache)?, macid(&y, &x, d, cache)?))
}

/// `Exp[X/M]·Exp[-X·B_λ]` for a single formal variable `x`, through degree `d`.
pub fn normalized_weight_series(lam: &Partition, d: u32) -> Result<MultiSeries<RatFunc>> {
    let mut x: MultiSeries<RatFunc> = MultiSeries::zero(vec!["x".into()], Truncation::per_variable(vec![d]));
    let b = RatFunc::from_laurent(&lam.b_poly());
    x.add_term(vec![1], inv_m().sub(&b));
    x.pleth_exp()
}

/// Rational value helper for tests and reports.
pub fn rational_coefficient(f: &RatFunc) -> Option<Rational> {
    f.as_laurent().filter(|l| l.terms().all(|(m, _)| m.is_one())).map(|l| l.eval_one())
}
