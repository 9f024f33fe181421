//! Dense integer polynomials in one variable (`UPoly`, in `t1`) and two
//! variables (`ZPoly`, stored as a polynomial in `t2` with `UPoly`
//! coefficients).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense polynomial in `t1` with integer coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UPoly(pub Vec<BigInt>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    pub fn from_coeffs(c: Vec<BigInt>) -> Self {
        let mut p = UPoly(c);
        p.trim();
        p
    }

    pub fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i);
            let b = other.0.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn scale(&self, s: &BigInt) -> UPoly {
        if s.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|c| c * s).collect())
    }

    /// Multiply by `t1^k`.
    pub fn shift(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); k];
        out.extend(self.0.iter().cloned());
        UPoly(out)
    }

    /// Gcd of the integer coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by `d`; `None` unless all are divisible.
    pub fn div_scalar(&self, d: &BigInt) -> Option<UPoly> {
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(UPoly(out))
    }

    /// Exact division in `Z[t1]`.
    pub fn exact_div(&self, d: &UPoly) -> Option<UPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(UPoly::zero());
        }
        let dd = d.0.len() - 1;
        if self.0.len() <= dd {
            return None;
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        let lead = d.lc();
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (f, rem) = top.div_rem(lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, c) in d.0.iter().enumerate() {
                r[k + j] -= &f * c;
            }
            q[k] = f;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(UPoly::from_coeffs(q))
        } else {
            None
        }
    }

    pub fn eval_mod(&self, x: u64, p: u64) -> u64 {
        let pb = BigInt::from(p);
        self.0.iter().rev().fold(0u64, |acc, c| {
            let c = reduce_mod(c, &pb);
            (acc * x + c) % p
        })
    }

    pub fn to_mod(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self.0.iter().map(|c| reduce_mod(c, &pb)).collect();
        super::modp::trim(&mut v);
        v
    }

    /// Number of trailing factors of `t1`.
    pub fn low_order(&self) -> usize {
        self.0.iter().position(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn unshift(&self, k: usize) -> UPoly {
        UPoly(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn max_abs(&self) -> BigInt {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

pub fn reduce_mod(c: &BigInt, p: &BigInt) -> u64 {
    let r = c.mod_floor(p);
    r.try_into().expect("residue fits in u64")
}

/// Polynomial in `t1, t2` with integer coefficients; `rows[j]` is the
/// coefficient of `t2^j`. No trailing zero rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    pub rows: Vec<UPoly>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { rows: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::from_upoly(UPoly::constant(BigInt::one()))
    }

    pub fn from_upoly(u: UPoly) -> Self {
        let mut z = ZPoly { rows: vec![u] };
        z.trim();
        z
    }

    pub fn from_rows(rows: Vec<UPoly>) -> Self {
        let mut z = ZPoly { rows };
        z.trim();
        z
    }

    /// Build from `(e1, e2, c)` triples with nonnegative exponents.
    pub fn from_terms<'a>(terms: impl IntoIterator<Item = (usize, usize, &'a BigInt)>) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for (e1, e2, c) in terms {
            if rows.len() <= e2 {
                rows.resize(e2 + 1, Vec::new());
            }
            let row = &mut rows[e2];
            if row.len() <= e1 {
                row.resize(e1 + 1, BigInt::zero());
            }
            row[e1] += c;
        }
        ZPoly::from_rows(rows.into_iter().map(UPoly::from_coeffs).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows.iter().enumerate().flat_map(|(e2, row)| {
            row.0
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(e1, c)| (e1, e2, c))
        })
    }

    pub fn trim(&mut self) {
        for r in &mut self.rows {
            r.trim();
        }
        while self.rows.last().is_some_and(|r| r.is_zero()) {
            self.rows.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.rows.len() == 1 && self.rows[0].is_one()
    }

    /// Degree in `t2`; `None` for zero.
    pub fn deg_y(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Degree in `t1`; `None` for zero.
    pub fn deg_x(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    pub fn lc_y(&self) -> &UPoly {
        self.rows.last().expect("leading coefficient of zero polynomial")
    }

    /// Sign-defining coefficient: leading `t1` coefficient of the leading `t2` row.
    pub fn lead(&self) -> &BigInt {
        self.lc_y().lc()
    }

    pub fn is_constant(&self) -> bool {
        self.rows.len() <= 1 && self.rows.first().is_none_or(|r| r.0.len() <= 1)
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.rows.len().max(other.rows.len());
        let zero = UPoly::zero();
        let rows = (0..n)
            .map(|i| {
                let a = self.rows.get(i).unwrap_or(&zero);
                let b = other.rows.get(i).unwrap_or(&zero);
                a.add(b)
            })
            .collect();
        ZPoly::from_rows(rows)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly { rows: self.rows.iter().map(UPoly::neg).collect() }
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        if self.rows.len() == 1 && other.rows.len() == 1 {
            return ZPoly::from_upoly(self.rows[0].mul(&other.rows[0]));
        }
        let mut rows = vec![UPoly::zero(); self.rows.len() + other.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.rows.iter().enumerate() {
                if !b.is_zero() {
                    rows[i + j] = rows[i + j].add(&a.mul(b));
                }
            }
        }
        ZPoly::from_rows(rows)
    }

    pub fn scale(&self, s: &BigInt) -> ZPoly {
        if s.is_zero() {
            return ZPoly::zero();
        }
        ZPoly { rows: self.rows.iter().map(|r| r.scale(s)).collect() }
    }

    pub fn mul_upoly(&self, u: &UPoly) -> ZPoly {
        ZPoly::from_rows(self.rows.iter().map(|r| r.mul(u)).collect())
    }

    /// Multiply by `t1^a t2^b`.
    pub fn shift(&self, a: usize, b: usize) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut rows = vec![UPoly::zero(); b];
        rows.extend(self.rows.iter().map(|r| r.shift(a)));
        ZPoly { rows }
    }

    /// Largest monomial `t1^a t2^b` dividing the polynomial.
    pub fn monomial_content(&self) -> (usize, usize) {
        if self.is_zero() {
            return (0, 0);
        }
        let b = self.rows.iter().position(|r| !r.is_zero()).unwrap_or(0);
        let a = self
            .rows
            .iter()
            .filter(|r| !r.is_zero())
            .map(UPoly::low_order)
            .min()
            .unwrap_or(0);
        (a, b)
    }

    /// Divide by `t1^a t2^b`, which must divide exactly.
    pub fn unshift(&self, a: usize, b: usize) -> ZPoly {
        ZPoly::from_rows(self.rows[b..].iter().map(|r| r.unshift(a)).collect())
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for r in &self.rows {
            for c in &r.0 {
                g = g.gcd(c);
                if g.is_one() {
                    return g;
                }
            }
        }
        g
    }

    pub fn div_scalar(&self, d: &BigInt) -> Option<ZPoly> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.div_scalar(d))
            .collect::<Option<Vec<_>>>()?;
        Some(ZPoly { rows })
    }

    pub fn div_upoly(&self, d: &UPoly) -> Option<ZPoly> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.exact_div(d))
            .collect::<Option<Vec<_>>>()?;
        Some(ZPoly::from_rows(rows))
    }

    /// Exact division in `Z[t1, t2]`.
    pub fn exact_div(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if d.rows.len() == 1 {
            return self.div_upoly(&d.rows[0]);
        }
        let dy = d.rows.len() - 1;
        if self.rows.len() <= dy {
            return None;
        }
        let mut r = self.rows.clone();
        let mut q = vec![UPoly::zero(); r.len() - dy];
        let lead = d.lc_y();
        for k in (0..q.len()).rev() {
            if r[k + dy].is_zero() {
                continue;
            }
            let f = r[k + dy].exact_div(lead)?;
            for (j, c) in d.rows.iter().enumerate() {
                r[k + j] = r[k + j].sub(&f.mul(c));
            }
            q[k] = f;
        }
        if r.iter().all(UPoly::is_zero) {
            Some(ZPoly::from_rows(q))
        } else {
            None
        }
    }

    /// Substitute `t1 = x` modulo `p`, giving a polynomial in `t2`.
    pub fn eval_x_mod(&self, x: u64, p: u64) -> Vec<u64> {
        let mut v: Vec<u64> = self.rows.iter().map(|r| r.eval_mod(x, p)).collect();
        super::modp::trim(&mut v);
        v
    }

    /// Primitive over `Z` with positive sign-defining coefficient.
    pub fn normalized(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        if c.is_one() {
            return self.clone();
        }
        self.div_scalar(&c).expect("content divides")
    }

    pub fn height_bits(&self) -> u64 {
        self.rows.iter().map(|r| r.max_abs().bits()).max().unwrap_or(0)
    }
}
