//! Modified Macdonald polynomials over `Q(t1, t2)`.
//!
//! Construction: Gram–Schmidt on monomial symmetric functions under the
//! `(q, t)` pairing gives `P_λ`; the integral form `J_λ = c_λ P_λ` is pushed
//! through `X ↦ X/(1 - t)`, and `t ↦ 1/t` with a `t^{n(λ)}` rescaling yields
//! the modified polynomial. Which torus variable plays `q` is fixed by the
//! principal specialization gate and then frozen.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::rat_frac;
use crate::algebra::{MonomialMap, MultiSeries, RatFunc, Rational, TLaurent, TMonomial, Truncation};
use crate::error::{Error, Result};
use crate::partitions::{enumerate, Partition};
use crate::symfunc::{monomial_sym, op_u, op_ustar, qt_inner, star_inner, sym_exp, SymFunc};

pub const CACHE_VERSION: &str = concat!("hilbk-macdonald-", env!("CARGO_PKG_VERSION"), "-1");

/// Largest size for which the pairwise orthogonality check is part of certification.
pub const ORTHOGONALITY_CHECK_MAX: u32 = 4;

/// Which torus weight plays Macdonald's `q` and `t`, and whether the
/// diagram is conjugated before construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub q: (i64, i64),
    pub t: (i64, i64),
    pub transpose: bool,
}

impl Roles {
    /// Candidates in the order they are tried.
    pub fn candidates() -> [Roles; 4] {
        let t1 = (1, 0);
        let t2 = (0, 1);
        [
            Roles { q: t1, t: t2, transpose: false },
            Roles { q: t2, t: t1, transpose: false },
            Roles { q: t1, t: t2, transpose: true },
            Roles { q: t2, t: t1, transpose: true },
        ]
    }

    fn qm(&self) -> TMonomial {
        TMonomial::new(self.q.0, self.q.1)
    }

    fn tm(&self) -> TMonomial {
        TMonomial::new(self.t.0, self.t.1)
    }

    /// `t ↦ 1/t`, `q` fixed.
    fn invert_t(&self) -> MonomialMap {
        let flip = |v: (i64, i64)| if v == self.t { TMonomial::new(-v.0, -v.1) } else { TMonomial::new(v.0, v.1) };
        MonomialMap { t1: flip((1, 0)), t2: flip((0, 1)) }
    }
}

fn one_minus(m: TMonomial) -> RatFunc {
    RatFunc::from_laurent(&TLaurent::one_minus(m))
}

/// `P_λ` for every `λ ⊢ n`, in the order of [`enumerate`].
pub fn macdonald_p_degree(n: u32, q: TMonomial, t: TMonomial) -> Vec<(Partition, SymFunc)> {
    let parts = enumerate(n);
    let mut done: Vec<(Partition, SymFunc, RatFunc)> = Vec::with_capacity(parts.len());
    // ascending through a linear extension of dominance
    for lam in parts.iter().rev() {
        let m = monomial_sym(lam, n);
        let mut p = m.clone();
        for (_, pm, norm) in &done {
            let c = qt_inner(&m, pm, q, t);
            if !c.is_zero() {
                p = p.sub(&pm.scale(&c.div(norm).expect("nonzero norm")));
            }
        }
        let norm = qt_inner(&p, &p, q, t);
        done.push((lam.clone(), p, norm));
    }
    let mut out: Vec<(Partition, SymFunc)> = done.into_iter().map(|(l, p, _)| (l, p)).collect();
    out.reverse();
    out
}

pub fn macdonald_p(lam: &Partition, q: TMonomial, t: TMonomial) -> SymFunc {
    macdonald_p_degree(lam.size(), q, t)
        .into_iter()
        .find(|(l, _)| l == lam)
        .map(|(_, p)| p)
        .expect("partition enumerated")
}

/// Modified polynomials for every `λ ⊢ n` under the given roles, uncertified.
pub fn modified_h_degree(n: u32, roles: Roles) -> Vec<(Partition, SymFunc)> {
    let (q, t) = (roles.qm(), roles.tm());
    let ps = macdonald_p_degree(n, q, t);
    let plethysm: Vec<RatFunc> = (0..=n as i64).map(|k| if k == 0 { RatFunc::one() } else { one_minus(t.pow(k)).inv().unwrap() }).collect();
    let inv_t = roles.invert_t();
    let built: BTreeMap<Partition, SymFunc> = ps
        .into_par_iter()
        .map(|(lam, p)| {
            let mut c = RatFunc::one();
            for cell in lam.cells() {
                let a = lam.arm(cell).unwrap() as i64;
                let l = lam.leg(cell).unwrap() as i64;
                c = c.mul(&one_minus(q.pow(a).mul(t.pow(l + 1))));
            }
            let j = p.scale(&c);
            let h = j.subst_diag(|k| plethysm[k as usize].clone());
            let shift = RatFunc::monomial(t.pow(lam.n_stat() as i64));
            let ht = h.map_coeffs(|x| x.map_monomials(&inv_t).expect("monomial map").mul(&shift));
            (lam, ht)
        })
        .collect();
    enumerate(n)
        .into_iter()
        .map(|lam| {
            let src = if roles.transpose { lam.conjugate() } else { lam.clone() };
            (lam, built[&src].clone())
        })
        .collect()
}

/// `Π_{(c1,c2) ∈ λ} (1 - x t1^c1 t2^c2)` as a series in `x`.
fn principal_target(lam: &Partition, trunc: u32) -> MultiSeries<RatFunc> {
    let mut acc = x_series(trunc, &[(0, TLaurent::one())]);
    for c in lam.cells() {
        let f = x_series(trunc, &[(0, TLaurent::one()), (1, TLaurent::term(Partition::cell_weight(c), Rational::from_integer((-1).into())))]);
        acc = acc.mul(&f).unwrap();
    }
    acc
}

fn x_series(trunc: u32, terms: &[(u32, TLaurent)]) -> MultiSeries<RatFunc> {
    let mut s = MultiSeries::zero(vec!["x".into()], Truncation::per_variable(vec![trunc]));
    for (e, c) in terms {
        s.add_term(vec![*e], RatFunc::from_laurent(c));
    }
    s
}

/// Checks `H[1] = 1`, the principal specialization and homogeneity.
pub fn certify_single(lam: &Partition, h: &SymFunc) -> Result<()> {
    let fail = |reason: String| Err(Error::Certification { partition: lam.to_string(), reason });
    let n = lam.size();
    if !h.is_homogeneous(n) {
        return fail(format!("not homogeneous of degree {n}"));
    }
    if !h.at_one().is_one() {
        return fail(format!("H[1] = {} instead of 1", h.at_one()));
    }
    let x = x_series(n, &[(0, TLaurent::one()), (1, TLaurent::from_int(-1))]);
    let got = h.pleth_eval(&x)?;
    let want = principal_target(lam, n);
    if got != want {
        return fail("H[1 - x] does not factor over the cells".into());
    }
    Ok(())
}

/// Pairwise `⟨H_λ, H_μ⟩∗ = δ·H_λ[-1]·C_λ` within one degree.
pub fn certify_orthogonality(basis: &[(Partition, SymFunc)]) -> Result<()> {
    let pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|i| (i..basis.len()).map(move |j| (i, j))).collect();
    pairs.into_par_iter().try_for_each(|(i, j)| {
        let (li, hi) = &basis[i];
        let (_, hj) = &basis[j];
        let v = star_inner(hi, hj);
        let want = if i == j { RatFunc::from_laurent(&li.nabla_eigenvalue().mul(&li.c_lambda())) } else { RatFunc::zero() };
        if v != want {
            return Err(Error::Certification {
                partition: li.to_string(),
                reason: format!("star pairing with {} is {v}, expected {want}", basis[j].0),
            });
        }
        Ok(())
    })
}

/// Certified modified Macdonald polynomials, filled degree by degree.
pub struct MacdonaldCache {
    roles: Roles,
    table: Mutex<BTreeMap<u32, Vec<(Partition, SymFunc)>>>,
}

impl MacdonaldCache {
    /// Resolve the role assignment on `(2)` and `(1,1)`, then freeze it.
    pub fn new() -> Result<Self> {
        let mut tried = Vec::new();
        for roles in Roles::candidates() {
            let deg2 = modified_h_degree(2, roles);
            if deg2.iter().all(|(l, h)| certify_single(l, h).is_ok()) {
                return Ok(MacdonaldCache::with_roles(roles));
            }
            tried.push(format!("{roles:?}"));
        }
        Err(Error::Certification { partition: "(2), (1,1)".into(), reason: format!("no role assignment passes: {}", tried.join("; ")) })
    }

    /// A cache with a fixed role assignment; entries are still certified.
    pub fn with_roles(roles: Roles) -> Self {
        MacdonaldCache { roles, table: Mutex::new(BTreeMap::new()) }
    }

    pub fn roles(&self) -> Roles {
        self.roles
    }

    /// All certified `H_λ` with `|λ| = n`.
    pub fn degree(&self, n: u32) -> Result<Vec<(Partition, SymFunc)>> {
        if let Some(v) = self.table.lock().unwrap().get(&n) {
            return Ok(v.clone());
        }
        let basis = modified_h_degree(n, self.roles);
        basis.par_iter().try_for_each(|(l, h)| certify_single(l, h))?;
        if n <= ORTHOGONALITY_CHECK_MAX {
            certify_orthogonality(&basis)?;
        }
        // a concurrent builder produced the same certified values
        self.table.lock().unwrap().entry(n).or_insert_with(|| basis.clone());
        Ok(basis)
    }

    pub fn get(&self, lam: &Partition) -> Result<SymFunc> {
        let basis = self.degree(lam.size())?;
        Ok(basis.into_iter().find(|(l, _)| l == lam).map(|(_, h)| h).expect("partition enumerated"))
    }

    /// All certified `H_λ` with `|λ| ≤ n`, each carrying degree cap `cap`.
    pub fn upto(&self, n: u32, cap: u32) -> Result<Vec<(Partition, SymFunc)>> {
        let mut out = Vec::new();
        for d in 0..=n {
            out.extend(self.degree(d)?.into_iter().map(|(l, h)| (l, h.with_cap(cap))));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let table = self.table.lock().unwrap();
        let mut entries = serde_json::Map::new();
        for basis in table.values() {
            for (l, h) in basis {
                entries.insert(l.key(), h.to_json_value());
            }
        }
        let doc = serde_json::json!({
            "version": CACHE_VERSION,
            "roles": self.roles,
            "table": serde_json::Value::Object(entries),
        });
        serde_json::to_string(&doc).expect("cache serializes")
    }

    /// Load a cache file; stale versions are ignored and entries re-certified.
    pub fn from_json(s: &str) -> Result<Option<Self>> {
        let doc: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.get("version").and_then(|v| v.as_str()) != Some(CACHE_VERSION) {
            return Ok(None);
        }
        let roles: Roles = serde_json::from_value(doc["roles"].clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let table = doc["table"].as_object().ok_or_else(|| Error::Parse("cache table".into()))?;
        let mut by_degree: BTreeMap<u32, BTreeMap<Partition, SymFunc>> = BTreeMap::new();
        for (k, v) in table {
            let lam = Partition::from_key(k)?;
            let h = SymFunc::from_json_value(v, lam.size())?;
            certify_single(&lam, &h)?;
            by_degree.entry(lam.size()).or_default().insert(lam, h);
        }
        let cache = MacdonaldCache::with_roles(roles);
        {
            let mut t = cache.table.lock().unwrap();
            for (n, m) in by_degree {
                let complete = enumerate(n).iter().all(|l| m.contains_key(l));
                if !complete {
                    continue;
                }
                let basis: Vec<(Partition, SymFunc)> = enumerate(n).into_iter().map(|l| { let h = m[&l].clone(); (l, h) }).collect();
                if n <= ORTHOGONALITY_CHECK_MAX {
                    certify_orthogonality(&basis)?;
                }
                t.insert(n, basis);
            }
        }
        Ok(Some(cache))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Option<Self>> {
        match std::fs::read_to_string(path) {
            Ok(s) => MacdonaldCache::from_json(&s),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Io(e.to_string())),
        }
    }
}

/// Process-wide cache with the resolved role assignment.
pub fn global() -> &'static MacdonaldCache {
    static CACHE: OnceLock<MacdonaldCache> = OnceLock::new();
    CACHE.get_or_init(|| MacdonaldCache::new().expect("a role assignment passes certification"))
}

/// Coefficients of `F` in the basis `{H_λ}`, via star orthogonality.
pub fn expand_in_h(f: &SymFunc, cache: &MacdonaldCache) -> Result<BTreeMap<Partition, RatFunc>> {
    let mut out = BTreeMap::new();
    for d in 0..=f.max_degree().unwrap_or(0) {
        let fd = f.homogeneous(d);
        if fd.is_zero() {
            continue;
        }
        for (lam, h) in cache.degree(d)? {
            let c = star_inner(&fd, &h);
            if c.is_zero() {
                continue;
            }
            let norm = RatFunc::from_laurent(&lam.nabla_eigenvalue().mul(&lam.c_lambda()));
            out.insert(lam, c.div(&norm)?);
        }
    }
    Ok(out)
}

/// `∇`: scales each `H_λ` component by `H_λ[-1]`.
pub fn op_nabla(f: &SymFunc, cache: &MacdonaldCache) -> Result<SymFunc> {
    let coeffs = expand_in_h(f, cache)?;
    let mut out = SymFunc::zero(f.cap());
    for (lam, c) in coeffs {
        let h = cache.get(&lam)?.with_cap(f.cap());
        out = out.add(&h.scale(&c.mul(&RatFunc::from_laurent(&lam.nabla_eigenvalue()))));
    }
    Ok(out)
}

/// Both sides of `∇U*U H_λ = Exp[X/M]·Exp[-X·B_λ]`, truncated at `cap`.
pub fn videntity_sides(lam: &Partition, cap: u32, cache: &MacdonaldCache) -> Result<(SymFunc, SymFunc)> {
    let h = cache.get(lam)?.with_cap(cap);
    let lhs = op_nabla(&op_ustar(&op_u(&h)), cache)?;
    let b = lam.b_poly();
    let rhs = sym_exp(|n| inv_m_adams(n).sub(&RatFunc::from_laurent(&b.adams(n))), cap);
    Ok((lhs, rhs))
}

fn inv_m_adams(n: u32) -> RatFunc {
    let n = n as i64;
    let m = TLaurent::one_minus(TMonomial::new(n, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, n)));
    RatFunc::new(&TLaurent::one(), &m).unwrap()
}

/// Rank of the coefficient matrix of `{H_λ : λ ⊢ n}` at a sample point;
/// full rank there proves linear independence over `Q(t1, t2)`.
pub fn sample_rank(basis: &[(Partition, SymFunc)], n: u32) -> usize {
    let cols = enumerate(n);
    let (a, b) = (rat_frac(2, 3), rat_frac(5, 7));
    let mut m: Vec<Vec<Rational>> = basis
        .iter()
        .map(|(_, h)| cols.iter().map(|mu| h.coeff(mu).eval_at(&a, &b).expect("sample point off poles")).collect())
        .collect();
    let mut rank = 0;
    for col in 0..cols.len() {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(rank, piv);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}
