//! Young diagrams and the fixed-point data attached to them.
//!
//! A cell `(c1, c2)` lies in `λ` iff `c2 < parts[c1]`; it carries the weight
//! `t1^c1 t2^c2`. The leg runs along `c1` and the arm along `c2`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Rational, TLaurent, TMonomial};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub c1: u32,
    pub c2: u32,
}

impl Partition {
    /// Sorts the parts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let w = self.parts.first().copied().unwrap_or(0);
        let parts = (0..w).map(|j| self.parts.iter().filter(|&&p| p > j).count() as u32).collect();
        Partition { parts }
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.parts.get(c.c1 as usize).is_some_and(|&p| c.c2 < p)
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.parts.iter().enumerate().flat_map(|(i, &p)| (0..p).map(move |j| Cell { c1: i as u32, c2: j }))
    }

    pub fn arm(&self, c: Cell) -> Result<u32> {
        if !self.contains(c) {
            return Err(Error::CellNotInDiagram(c.c1, c.c2));
        }
        Ok(self.parts[c.c1 as usize] - c.c2 - 1)
    }

    pub fn leg(&self, c: Cell) -> Result<u32> {
        if !self.contains(c) {
            return Err(Error::CellNotInDiagram(c.c1, c.c2));
        }
        let below = self.parts[c.c1 as usize..].iter().take_while(|&&p| p > c.c2).count() as u32;
        Ok(below - 1)
    }

    pub fn cell_weight(c: Cell) -> TMonomial {
        TMonomial::new(c.c1 as i64, c.c2 as i64)
    }

    /// Weights `w` with `C_λ = Π (1 - w)`, two per cell.
    pub fn tangent_weights(&self) -> Vec<TMonomial> {
        let mut out = Vec::with_capacity(2 * self.size() as usize);
        for c in self.cells() {
            let a = self.arm(c).unwrap() as i64;
            let l = self.leg(c).unwrap() as i64;
            out.push(TMonomial::new(l + 1, -a));
            out.push(TMonomial::new(-l, a + 1));
        }
        out
    }

    /// `Σ_{(c1,c2) ∈ λ} t1^c1 t2^c2`.
    pub fn b_poly(&self) -> TLaurent {
        TLaurent::from_terms(self.cells().map(|c| (Partition::cell_weight(c), Rational::one())))
    }

    pub fn c_lambda(&self) -> TLaurent {
        self.tangent_weights().into_iter().fold(TLaurent::one(), |acc, w| acc.mul(&TLaurent::one_minus(w)))
    }

    /// `(-1)^{|λ|} t1^{Σ c1} t2^{Σ c2}`.
    pub fn nabla_eigenvalue(&self) -> TLaurent {
        let m = self.cells().fold(TMonomial::ONE, |acc, c| acc.mul(Partition::cell_weight(c)));
        let sign = if self.size().is_multiple_of(2) { 1 } else { -1 };
        TLaurent::term(m, Rational::from_integer(BigInt::from(sign)))
    }

    /// `Σ (i - 1) λ_i` with rows counted from 1.
    pub fn n_stat(&self) -> u32 {
        self.parts.iter().enumerate().map(|(i, &p)| i as u32 * p).sum()
    }

    /// Order of the centralizer of a permutation of cycle type `λ`.
    pub fn z_lambda(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let mut mult = 0u32;
            while i < self.parts.len() && self.parts[i] == p {
                mult += 1;
                i += 1;
                z *= BigInt::from(p) * BigInt::from(mult);
            }
        }
        z
    }

    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        let n = self.len().max(other.len());
        let (mut s, mut t) = (0u32, 0u32);
        for i in 0..n {
            s += self.parts.get(i).copied().unwrap_or(0);
            t += other.parts.get(i).copied().unwrap_or(0);
            if s > t {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn hook_sum(&self) -> u32 {
        self.cells().map(|c| self.arm(c).unwrap() + self.leg(c).unwrap() + 1).sum()
    }

    /// Cache key such as `"2,1"`; empty string for the empty partition.
    pub fn key(&self) -> String {
        self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn from_key(s: &str) -> Result<Partition> {
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts: std::result::Result<Vec<u32>, _> = s.split(',').map(|p| p.trim().parse::<u32>()).collect();
        let parts = parts.map_err(|e| Error::Parse(format!("partition key {s:?}: {e}")))?;
        Ok(Partition::new(parts))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// All partitions of `n` in reverse-lexicographic order.
pub fn enumerate(n: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(n, n, &mut cur, &mut out);
    out
}

fn fill(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        fill(rest - p, p, cur, out);
        cur.pop();
    }
}

/// Partitions of every size `0..=n`, grouped by size.
pub fn enumerate_upto(n: u32) -> Vec<Partition> {
    (0..=n).flat_map(enumerate).collect()
}
