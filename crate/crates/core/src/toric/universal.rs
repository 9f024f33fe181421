//! Extraction of surface-independent series from logarithms of surface
//! series, by an exact overdetermined linear solve in the Chern numbers.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::series::Exponent;
use crate::algebra::{MultiSeries, Rational};
use crate::error::{Error, Result};
use crate::hilb_c2::Orders;
use crate::toric::classes::{parse_bundle, EqClassS};
use crate::toric::surface::ToricSurface;
use crate::toric::zsurface::z_surface;

/// A surface with one class per rank slot.
#[derive(Clone, Debug)]
pub struct UniversalConfig {
    pub surface: ToricSurface,
    pub classes: Vec<EqClassS>,
    pub label: String,
}

impl UniversalConfig {
    /// `S:bundle/bundle/...`, e.g. `P2:O(1)` or `F1:O(1,0)/sum:O(0,1)+O(1,0)`.
    pub fn parse(spec: &str) -> Result<Self> {
        let (s, rest) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("config {spec:?} lacks ':'")))?;
        let surface = ToricSurface::parse(s)?;
        let classes = rest.split('/').map(|b| parse_bundle(&surface, b)).collect::<Result<_>>()?;
        Ok(UniversalConfig { surface, classes, label: spec.trim().to_string() })
    }
}

/// Chern numbers entering the universal factorization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernData {
    pub chi_o: i64,
    pub k2: i64,
    pub k_dot_c1: Vec<i64>,
    pub c2: Vec<i64>,
    /// `c1(α_i)·c1(α_j)` for `i ≤ j`, row-major.
    pub c1_dot_c1: Vec<i64>,
}

impl ChernData {
    pub fn of(s: &ToricSurface, classes: &[EqClassS]) -> Result<Self> {
        let k = s.canonical();
        let ch = classes
            .iter()
            .map(|c| c.chern(s).ok_or_else(|| Error::InvalidModel("class without a splitting".into())))
            .collect::<Result<Vec<_>>>()?;
        let mut c1_dot_c1 = Vec::new();
        for i in 0..ch.len() {
            for j in i..ch.len() {
                c1_dot_c1.push(s.intersect(&ch[i].c1, &ch[j].c1));
            }
        }
        Ok(ChernData {
            chi_o: s.chi_o(),
            k2: s.intersect(&k, &k),
            k_dot_c1: ch.iter().map(|c| s.intersect(&k, &c.c1)).collect(),
            c2: ch.iter().map(|c| c.c2).collect(),
            c1_dot_c1,
        })
    }

    pub fn row(&self) -> Vec<i64> {
        let mut r = vec![self.chi_o, self.k2];
        r.extend(&self.k_dot_c1);
        r.extend(&self.c2);
        r.extend(&self.c1_dot_c1);
        r
    }
}

/// Names of the Chern directions and of the matching series, in row order.
pub fn unknown_labels(l: usize) -> Vec<(String, String)> {
    let mut v = vec![("chi(O)".to_string(), "A".to_string()), ("K^2".to_string(), "B".to_string())];
    v.extend((1..=l).map(|i| (format!("K.c1(α_{i})"), format!("C_{i}"))));
    v.extend((1..=l).map(|i| (format!("c2(α_{i})"), format!("D_{i}"))));
    for i in 1..=l {
        for j in i..=l {
            v.push((format!("c1(α_{i}).c1(α_{j})"), format!("E_{i}{j}")));
        }
    }
    v
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniversalFactorization {
    pub ranks: Vec<i64>,
    /// `(Chern direction, series name)` per unknown.
    pub labels: Vec<(String, String)>,
    /// Logarithm of each universal series.
    pub logs: Vec<MultiSeries<Rational>>,
    /// Largest absolute residual over all configurations and coefficients.
    pub residual: Rational,
    pub configs: Vec<String>,
}

impl UniversalFactorization {
    pub fn series(&self, name: &str) -> Result<MultiSeries<Rational>> {
        let i = self.labels.iter().position(|(_, n)| n == name).ok_or_else(|| Error::VariableMismatch(name.to_string()))?;
        self.logs[i].exp()
    }
}

fn rank_of(rows: &[Vec<Rational>]) -> usize {
    pivot_rows(rows).len()
}

/// Indices of a maximal independent subset of rows, chosen greedily.
fn pivot_rows(rows: &[Vec<Rational>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut chosen = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut v = r.clone();
        for (p, b) in &basis {
            if !v[*p].is_zero() {
                let f = &v[*p] / &b[*p];
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            basis.push((p, v));
            chosen.push(i);
        }
    }
    chosen
}

fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut m: Vec<Vec<Rational>> = a.iter().zip(b).map(|(r, x)| r.iter().cloned().chain([x.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).expect("independent rows");
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        let pr = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    m.into_iter().map(|r| r[n].clone()).collect()
}

/// Solve `log Ẑ_S = Σ (Chern number)·(log universal series)` coefficientwise.
pub fn universal_extract(ranks: &[i64], configs: &[UniversalConfig], orders: &Orders) -> Result<UniversalFactorization> {
    let l = ranks.len();
    let labels = unknown_labels(l);
    for c in configs {
        let got: Vec<i64> = c.classes.iter().map(|x| x.rank).collect();
        if got != ranks {
            return Err(Error::InvalidModel(format!("config {} has ranks {got:?}, expected {ranks:?}", c.label)));
        }
    }
    let rows: Vec<Vec<Rational>> = configs
        .iter()
        .map(|c| ChernData::of(&c.surface, &c.classes).map(|d| d.row().into_iter().map(|x| Rational::from_integer(x.into())).collect()))
        .collect::<Result<_>>()?;
    let full = rank_of(&rows);
    if full < labels.len() {
        let missing: Vec<String> = labels
            .iter()
            .enumerate()
            .filter(|(j, _)| {
                let mut ext = rows.clone();
                ext.push((0..labels.len()).map(|k| if k == *j { Rational::one() } else { Rational::zero() }).collect());
                rank_of(&ext) > full
            })
            .map(|(_, (d, _))| d.clone())
            .collect();
        return Err(Error::RankDeficient(missing.join(", ")));
    }
    let logs: Vec<MultiSeries<Rational>> =
        configs.par_iter().map(|c| z_surface(&c.surface, &c.classes, orders)?.log()).collect::<Result<_>>()?;
    let template = logs[0].zero_like();
    let exps: BTreeSet<Exponent> = logs.iter().flat_map(|s| s.terms().map(|(e, _)| e.clone())).collect();
    let pivots = pivot_rows(&rows);
    let a: Vec<Vec<Rational>> = pivots.iter().map(|&i| rows[i].clone()).collect();
    let mut out = vec![template.clone(); labels.len()];
    let mut residual = Rational::zero();
    for e in exps {
        let b: Vec<Rational> = logs.iter().map(|s| s.coeff(&e)).collect();
        let bp: Vec<Rational> = pivots.iter().map(|&i| b[i].clone()).collect();
        let x = solve_square(&a, &bp);
        for (row, bi) in rows.iter().zip(&b) {
            let fit: Rational = row.iter().zip(&x).map(|(r, xi)| r * xi).sum();
            let r = (fit - bi).abs();
            if r > residual {
                residual = r;
            }
        }
        for (s, xi) in out.iter_mut().zip(x) {
            s.add_term(e.clone(), xi);
        }
    }
    Ok(UniversalFactorization {
        ranks: ranks.to_vec(),
        labels,
        logs: out,
        residual,
        configs: configs.iter().map(|c| c.label.clone()).collect(),
    })
}

/// Deterministic configurations spanning every Chern direction for `ranks`.
/// Virtual summands make the second Chern class nonzero in rank one.
pub fn default_configs(ranks: &[i64]) -> Result<Vec<UniversalConfig>> {
    let surfaces = [("P2", vec!["O(0)", "O(1)", "O(2)", "O(3)", "O(-1)"]), ("P1xP1", vec!["O(1,1)", "O(1,2)", "O(0,1)", "O(2,0)"]), ("F1", vec!["O(1,0)", "O(0,1)", "O(1,1)", "O(2,1)"])];
    let mut out = Vec::new();
    for (s, lines) in &surfaces {
        let n = lines.len();
        for shift in 0..n {
            let mut specs = Vec::new();
            for (j, &r) in ranks.iter().enumerate() {
                let pick = |k: usize| lines[(shift + 2 * j + k) % n];
                let spec = match r {
                    1 if (shift + j) % 2 == 0 => pick(0).to_string(),
                    r => {
                        // r + 1 summands minus one, or r summands when r ≤ 0
                        let mut terms: Vec<String> = (0..(r.max(0) + 1) as usize).map(|k| format!("+{}", pick(k))).collect();
                        terms.push(format!("-{}", pick(r.max(0) as usize + 1)));
                        for k in 0..(-r).max(0) as usize {
                            terms.push(format!("-{}", pick(2 + k)));
                        }
                        format!("sum:{}", terms.concat().trim_start_matches('+'))
                    }
                };
                specs.push(spec);
            }
            out.push(UniversalConfig::parse(&format!("{s}:{}", specs.join("/")))?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_residual_vanishes() {
        let configs = default_configs(&[1]).unwrap();
        assert!(configs.len() >= 6);
        let u = universal_extract(&[1], &configs, &Orders::new(3, 2)).unwrap();
        assert!(u.residual.is_zero());
        let a = u.series("A").unwrap();
        for n in 0..=3 {
            assert_eq!(a.coeff(&[n, 0]), Rational::one());
        }
    }

    #[test]
    fn line_bundles_leave_c2_unprobed() {
        let configs: Vec<UniversalConfig> = ["P2:O(0)", "P2:O(1)", "P2:O(2)", "P1xP1:O(1,1)", "P1xP1:O(1,2)", "F1:O(1,0)", "F1:O(0,1)"]
            .iter()
            .map(|s| UniversalConfig::parse(s).unwrap())
            .collect();
        match universal_extract(&[1], &configs, &Orders::new(2, 1)) {
            Err(Error::RankDeficient(m)) => assert_eq!(m, "c2(α_1)"),
            other => panic!("{other:?}"),
        }
        let one = [UniversalConfig::parse("P2:O(0)").unwrap()];
        assert!(matches!(universal_extract(&[1], &one, &Orders::new(2, 1)), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn default_configs_have_requested_ranks() {
        for ranks in [vec![1], vec![2], vec![1, 1], vec![-1]] {
            for c in default_configs(&ranks).unwrap() {
                assert_eq!(c.classes.iter().map(|x| x.rank).collect::<Vec<_>>(), ranks);
            }
            let u = universal_extract(&ranks, &default_configs(&ranks).unwrap(), &Orders::new(2, 2)).unwrap();
            assert!(u.residual.is_zero(), "{ranks:?}");
        }
    }
}
