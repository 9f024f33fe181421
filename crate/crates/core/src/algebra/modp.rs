//! Dense univariate polynomials over a prime field `Z/p`, `p < 2^31`.

use std::sync::OnceLock;

/// Primes just below `2^31`, largest first.
pub fn primes() -> impl Iterator<Item = u64> {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    let cached = PRIMES.get_or_init(|| {
        (1u64 << 30..(1u64 << 31))
            .rev()
            .filter(|&n| is_prime(n))
            .take(512)
            .collect()
    });
    cached.iter().copied()
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter().rev().fold(0, |acc, &c| (acc * x + c) % p)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&c| c * s % p).collect();
    trim(&mut out);
    out
}

/// Remainder of `a` modulo `b` (`b` nonzero).
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let f = r[r.len() - 1] * inv_lead % p;
        for (j, &c) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - f * c % p) % p;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd; the gcd of two zero polynomials is the zero polynomial.
pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        x = scale(&x, inv, p);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u64 = 101;

    #[test]
    fn gcd_of_products() {
        // (x+1)(x+2) and (x+1)(x+3)
        let a = mul(&[1, 1], &[2, 1], P);
        let b = mul(&[1, 1], &[3, 1], P);
        assert_eq!(gcd(&a, &b, P), vec![1, 1]);
        assert_eq!(gcd(&[2, 1], &[3, 1], P), vec![1]);
    }

    #[test]
    fn prime_list_starts_below_two_pow_31() {
        let ps: Vec<u64> = primes().take(3).collect();
        assert_eq!(ps[0], 2147483647);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
    }
}
