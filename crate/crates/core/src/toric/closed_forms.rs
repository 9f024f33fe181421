//! Known closed forms for descendent series of surfaces, compared exactly
//! against the localization output.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::series::Exponent;
use crate::algebra::{MultiSeries, Rational};
use crate::error::{Error, Result};
use crate::hilb_c2::Orders;
use crate::toric::classes::EqClassS;
use crate::toric::surface::ToricSurface;
use crate::toric::zsurface::z_surface;

type QSeries = MultiSeries<Rational>;

/// Outcome of one closed-form comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormCheck {
    pub name: String,
    pub surface: String,
    pub matched: bool,
    /// Truncation through which the comparison ran.
    pub through: String,
    /// First differing exponent, if any.
    pub mismatch: Option<String>,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn binom3(x: i64) -> Rational {
    int(x * (x - 1) * (x - 2)) / int(6)
}

fn poly(template: &QSeries, terms: &[(Exponent, Rational)]) -> QSeries {
    let mut s = template.zero_like();
    for (e, c) in terms {
        s.add_term(e.clone(), c.clone());
    }
    s
}

/// `(1 - x)^n` with `x` the monomial `e`.
fn one_minus_pow(template: &QSeries, e: Exponent, n: i64) -> Result<QSeries> {
    let zero = vec![0; e.len()];
    poly(template, &[(zero, Rational::one()), (e, -Rational::one())]).pow(n)
}

fn compare(name: &str, s: &ToricSurface, lhs: &QSeries, rhs: &QSeries) -> Result<ClosedFormCheck> {
    let diff = lhs.sub(rhs)?;
    let mismatch = diff.terms().next().map(|(e, c)| format!("{e:?}: difference {c}"));
    Ok(ClosedFormCheck {
        name: name.to_string(),
        surface: s.name.clone(),
        matched: mismatch.is_none(),
        through: format!("{:?} over {:?}", lhs.truncation().max, lhs.vars()),
        mismatch,
    })
}

fn chi(s: &ToricSurface, c: &EqClassS) -> Result<i64> {
    s.euler_char(&c.chars)
}

fn inv_geometric(template: &QSeries, s: &ToricSurface) -> Result<QSeries> {
    let mut e = vec![0; template.vars().len()];
    e[0] = 1;
    one_minus_pow(template, e, -s.chi_o())
}

/// `Z(∅) = (1 - q)^{-χ(O)}`.
pub fn check_empty(s: &ToricSurface, q: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, &[], &Orders::new(q, 0))?;
    let rhs = inv_geometric(&z, s)?;
    compare("empty", s, &z, &rhs)
}

/// `Z(α|1) = χ(α) q / (1 - q)^{χ(O)}`, read off the `m^1` line with sign `-1`.
pub fn check_first(s: &ToricSurface, alpha: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, std::slice::from_ref(alpha), &Orders::new(q, 1))?;
    let lhs = z.extract(1, 1).neg();
    let rhs = inv_geometric(&lhs, s)?.mul(&poly(&lhs, &[(vec![1], int(chi(s, alpha)?))]))?;
    compare("first descendent", s, &lhs, &rhs)
}

/// `Σ_k (-m)^k Z(L|k) = (1 - qm)^{χ(L)} / (1 - q)^{χ(O)}`.
pub fn check_wedge(s: &ToricSurface, l: &EqClassS, q: u32, m: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, std::slice::from_ref(l), &Orders::new(q, m))?;
    let rhs = inv_geometric(&z, s)?.mul(&one_minus_pow(&z, vec![1, 1], chi(s, l)?)?)?;
    compare("exterior powers of a line bundle", s, &z, &rhs)
}

/// `Σ_k (-m)^k Z(L, α|k, 1)` against its closed form.
pub fn check_line_times_class(s: &ToricSurface, l: &EqClassS, alpha: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let lhs = line_times_class_series(s, l, alpha, q)?;
    let mut sum = Vec::new();
    for n in 0..=q as i64 {
        let a = chi(s, &l.power(n)?.tensor(alpha))?;
        let b = chi(s, &l.power(n + 1)?.tensor(alpha))?;
        sum.push((vec![n as u32 + 1, n as u32], int(a)));
        sum.push((vec![n as u32 + 1, n as u32 + 1], int(-b)));
    }
    let rhs = inv_geometric(&lhs, s)?.mul(&one_minus_pow(&lhs, vec![1, 1], chi(s, l)?)?)?.mul(&poly(&lhs, &sum))?;
    compare("line bundle with one class", s, &lhs, &rhs)
}

/// `-[m2^1]` of the series for `(L, α)`, as a series in `q, m1` with the
/// `m1`-order equal to the `q`-order.
fn line_times_class_series(s: &ToricSurface, l: &EqClassS, alpha: &EqClassS, q: u32) -> Result<QSeries> {
    let orders = Orders { q, m_total: q + 1, m_each: Some(vec![q, 1]) };
    let z = z_surface(s, &[l.clone(), alpha.clone()], &orders)?;
    Ok(z.extract(2, 1).neg())
}

/// `Z(-L|3)` for a line bundle `L`.
pub fn check_neg_line_cubed(s: &ToricSurface, l: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, &[l.neg()], &Orders::new(q, 3))?;
    let lhs = z.extract(1, 3).neg();
    let c1 = chi(s, l)?;
    let c2 = chi(s, &l.power(2)?)?;
    let c3 = chi(s, &l.power(3)?)?;
    let ct = chi(s, &EqClassS::cotangent(s).tensor(&l.power(3)?))?;
    let a = int(c2 * c1 - ct);
    let num = poly(
        &lhs,
        &[
            (vec![3], a.clone() - binom3(c1 + 2)),
            (vec![2], -a + int(c3)),
            (vec![1], int(-c3)),
        ],
    );
    let rhs = inv_geometric(&lhs, s)?.mul(&num)?;
    compare("third exterior power of minus a line bundle", s, &lhs, &rhs)
}

/// Euler characteristics entering the rank 3 formulas.
struct RankThree {
    v: i64,
    w2: i64,
    w3: i64,
    w2v: i64,
    tw3: i64,
}

fn rank_three(s: &ToricSurface, v: &EqClassS) -> Result<RankThree> {
    if v.rank != 3 {
        return Err(Error::InvalidModel(format!("expected rank 3, got {}", v.rank)));
    }
    Ok(RankThree {
        v: chi(s, v)?,
        w2: chi(s, &v.wedge(2))?,
        w3: chi(s, &v.wedge(3))?,
        w2v: chi(s, &v.wedge(2).tensor(v))?,
        tw3: chi(s, &EqClassS::cotangent(s).tensor(&v.wedge(3)))?,
    })
}

/// `Z(V|3)` for a rank 3 bundle `V`.
pub fn check_rank_three(s: &ToricSurface, v: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, std::slice::from_ref(v), &Orders::new(q, 3))?;
    let lhs = z.extract(1, 3).neg();
    let x = rank_three(s, v)?;
    let a = int(x.tw3 + x.w2v - x.w2 * x.v);
    let num = poly(
        &lhs,
        &[
            (vec![3], a.clone() - int(x.w3) + binom3(x.v)),
            (vec![2], -a),
            (vec![1], int(x.w3)),
        ],
    );
    let rhs = inv_geometric(&lhs, s)?.mul(&num)?;
    compare("third exterior power of a rank 3 bundle", s, &lhs, &rhs)
}

/// The product form of the full series of a rank 3 bundle through `m^3`.
pub fn check_rank_three_product(s: &ToricSurface, v: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let z = z_surface(s, std::slice::from_ref(v), &Orders::new(q, 3))?;
    let x = rank_three(s, v)?;
    let f = |e: [u32; 2], n: i64| one_minus_pow(&z, e.to_vec(), n);
    let mut rhs = inv_geometric(&z, s)?;
    for part in [
        f([1, 1], x.v)?,
        f([2, 2], x.w2)?,
        f([1, 2], -x.w2)?,
        f([3, 3], x.w2v + x.tw3 - x.w3)?,
        f([2, 3], -(x.w2v + x.tw3))?,
        f([1, 3], x.w3)?,
    ] {
        rhs = rhs.mul(&part)?;
    }
    compare("rank 3 product form", s, &z, &rhs)
}

/// `Σ q^n χ(α^[n] ⊗ O^vir) = -c1(α)·K q/(1-q) - rk(α) K² q²/(1-q)²`, from the
/// line-bundle series with `L = K` at `m = 1`.
pub fn check_virtual(s: &ToricSurface, alpha: &EqClassS, q: u32) -> Result<ClosedFormCheck> {
    let k = EqClassS::canonical(s);
    let lhs = line_times_class_series(s, &k, alpha, q)?.eval_var_one(1);
    let chern = alpha.chern(s).ok_or_else(|| Error::InvalidModel("class without a splitting".into()))?;
    let kd = s.canonical();
    let c1k = s.intersect(&chern.c1, &kd);
    let k2 = s.intersect(&kd, &kd);
    let geo = one_minus_pow(&lhs, vec![1], -1)?;
    let rhs = poly(&lhs, &[(vec![1], int(-c1k))])
        .mul(&geo)?
        .sub(&poly(&lhs, &[(vec![2], int(alpha.rank * k2))]).mul(&geo.mul(&geo)?)?)?;
    compare("virtual structure sheaf", s, &lhs, &rhs)
}

/// `(1 - q)^{χ(O)}·Z(α|k)` is a polynomial of degree at most `Σk`, checked
/// through `q^{Σk + extra}`. Returns the polynomial on success.
pub fn check_polynomial(s: &ToricSurface, classes: &[EqClassS], k: &[u32], extra: u32) -> Result<(bool, QSeries)> {
    let total: u32 = k.iter().sum();
    let orders = Orders { q: total + extra, m_total: total, m_each: Some(k.to_vec()) };
    let z = z_surface(s, classes, &orders)?;
    let mut line = z;
    for (j, &kj) in k.iter().enumerate().rev() {
        line = line.extract(j + 1, kj);
    }
    if total % 2 == 1 {
        line = line.neg();
    }
    let f = line.mul(&one_minus_pow(&line, vec![1], s.chi_o())?)?;
    let ok = f.terms().all(|(e, c)| e[0] <= total || c.is_zero());
    Ok((ok, f))
}

/// The standard battery on one surface.
pub fn closed_form_suite(s: &ToricSurface, l: &EqClassS, alpha: &EqClassS, rank3: &[EqClassS], q: u32) -> Result<Vec<ClosedFormCheck>> {
    let mut out = vec![check_empty(s, q)?, check_first(s, alpha, q)?, check_wedge(s, l, q, q)?];
    out.push(check_line_times_class(s, l, alpha, q)?);
    out.push(check_neg_line_cubed(s, l, q)?);
    for v in rank3 {
        out.push(check_rank_three(s, v, q)?);
        out.push(check_rank_three_product(s, v, q)?);
    }
    out.push(check_virtual(s, alpha, q)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::classes::parse_bundle;

    #[test]
    fn p2_small_battery() {
        let p2 = ToricSurface::p2();
        let l = parse_bundle(&p2, "O(1)").unwrap();
        let a = parse_bundle(&p2, "O(2)").unwrap();
        let v = parse_bundle(&p2, "sum:O(0)+O(1)+O(2)").unwrap();
        for c in closed_form_suite(&p2, &l, &a, &[v], 3).unwrap() {
            assert!(c.matched, "{c:?}");
        }
    }

    #[test]
    fn wrong_formula_is_reported() {
        let p2 = ToricSurface::p2();
        let l = parse_bundle(&p2, "O(1)").unwrap();
        let z = z_surface(&p2, &[l], &Orders::new(3, 3)).unwrap();
        let wrong = inv_geometric(&z, &p2).unwrap().mul(&one_minus_pow(&z, vec![1, 1], 2).unwrap()).unwrap();
        let c = compare("wrong", &p2, &z, &wrong).unwrap();
        assert!(!c.matched && c.mismatch.is_some());
    }

    #[test]
    fn polynomiality_on_p1xp1() {
        let s = ToricSurface::p1xp1();
        let a = parse_bundle(&s, "O(1,2)").unwrap();
        let (ok, f) = check_polynomial(&s, &[a], &[2], 3).unwrap();
        assert!(ok);
        assert!(f.degree_in(0).unwrap() <= 2);
    }
}
