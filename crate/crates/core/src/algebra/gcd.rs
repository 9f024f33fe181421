//! Modular gcd of integer polynomials in one and two variables.
//!
//! Univariate: images modulo word-size primes, Chinese remaindering and a
//! trial-division check. Bivariate: Brown's dense algorithm, evaluating
//! `t1` at small points, interpolating, then remaindering over primes.
//! Results are primitive with positive sign-defining coefficient, i.e. the
//! gcd is only determined up to a rational scalar.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::modp;
use super::zpoly::{reduce_mod, UPoly, ZPoly};

fn symmetric(x: BigInt, m: &BigInt) -> BigInt {
    let half: BigInt = m >> 1;
    if x > half {
        x - m
    } else {
        x
    }
}

/// Combine `x mod m` (symmetric) with `r mod p`.
fn crt(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let xm = reduce_mod(x, &pb);
    let mm = reduce_mod(m, &pb);
    let diff = (r + p - xm) % p;
    let k = diff * modp::inv_mod(mm, p) % p;
    let val = x + m * BigInt::from(k);
    let mp = m * &pb;
    symmetric(val.mod_floor(&mp), &mp)
}

fn primitive_u(a: &UPoly) -> UPoly {
    if a.is_zero() {
        return UPoly::zero();
    }
    let mut c = a.content();
    if a.lc() < &BigInt::zero() {
        c = -c;
    }
    a.div_scalar(&c).expect("content divides")
}

/// Primitive gcd in `Z[t1]`.
pub fn uni_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_zero() {
        return primitive_u(b);
    }
    if b.is_zero() {
        return primitive_u(a);
    }
    if a.degree() == Some(0) || b.degree() == Some(0) {
        return UPoly::constant(BigInt::one());
    }
    let a = primitive_u(a);
    let b = primitive_u(b);
    if a == b {
        return a;
    }
    let gamma = a.lc().gcd(b.lc());
    let lead_prod = a.lc() * b.lc();

    let mut best: Option<(usize, BigInt, Vec<BigInt>)> = None;
    for p in modp::primes() {
        let pb = BigInt::from(p);
        if reduce_mod(&lead_prod, &pb) == 0 {
            continue;
        }
        let g = modp::gcd(&a.to_mod(p), &b.to_mod(p), p);
        if g.len() == 1 {
            return UPoly::constant(BigInt::one());
        }
        let g = modp::scale(&g, reduce_mod(&gamma, &pb), p);
        let d = g.len() - 1;
        let stable = match &mut best {
            Some((bd, _, _)) if d > *bd => continue,
            Some((bd, m, h)) if d == *bd => {
                let next: Vec<BigInt> = h.iter().zip(&g).map(|(x, &r)| crt(x, m, r, p)).collect();
                let same = next == *h;
                *h = next;
                *m *= &pb;
                same
            }
            _ => {
                let h = g.iter().map(|&r| symmetric(BigInt::from(r), &pb)).collect();
                best = Some((d, pb, h));
                false
            }
        };
        if stable {
            let (_, _, h) = best.as_ref().unwrap();
            let cand = primitive_u(&UPoly::from_coeffs(h.clone()));
            if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
                return cand;
            }
        }
    }
    unreachable!("prime list exhausted in univariate gcd")
}

/// Content with respect to `t2`: primitive gcd of the rows in `Z[t1]`.
pub fn content_y(a: &ZPoly) -> UPoly {
    let mut g = UPoly::zero();
    for r in &a.rows {
        if r.is_zero() {
            continue;
        }
        g = uni_gcd(&g, r);
        if g.degree() == Some(0) {
            break;
        }
    }
    g
}

/// Primitive gcd in `Z[t1, t2]`.
pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    if a.is_constant() || b.is_constant() {
        return ZPoly::one();
    }
    if a == b {
        return a.normalized();
    }
    let ca = content_y(a);
    let cb = content_y(b);
    let c = uni_gcd(&ca, &cb);
    let a1 = a.div_upoly(&ca).expect("content divides");
    let b1 = b.div_upoly(&cb).expect("content divides");
    let g = if a1.deg_y() == Some(0) || b1.deg_y() == Some(0) {
        ZPoly::one()
    } else {
        brown(&a1, &b1)
    };
    g.mul_upoly(&c).normalized()
}

fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    // Newton divided differences, then expand into the monomial basis.
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = (coef[i] + p - coef[i - 1]) % p;
            let den = (xs[i] + p - xs[i - j]) % p;
            coef[i] = num * modp::inv_mod(den, p) % p;
        }
    }
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + coef[i]
        let mut next = vec![0u64; n];
        for k in 0..n {
            if out[k] == 0 {
                continue;
            }
            if k + 1 < n {
                next[k + 1] = (next[k + 1] + out[k]) % p;
            }
            next[k] = (next[k] + p - out[k] * xs[i] % p) % p;
        }
        next[0] = (next[0] + coef[i]) % p;
        out = next;
    }
    out
}

fn brown(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let la = a.lc_y();
    let lb = b.lc_y();
    let gamma = uni_gcd(la, lb).scale(&la.content().gcd(&lb.content()));
    let bound = gamma.degree().unwrap_or(0)
        + a.deg_x().unwrap_or(0).min(b.deg_x().unwrap_or(0));
    let npoints = bound + 1;

    let mut best: Option<(usize, BigInt, Vec<Vec<BigInt>>)> = None;
    for p in modp::primes() {
        let pb = BigInt::from(p);
        if reduce_mod(gamma.lc(), &pb) == 0 {
            continue;
        }
        let mut xs: Vec<u64> = Vec::with_capacity(npoints);
        let mut imgs: Vec<Vec<u64>> = Vec::with_capacity(npoints);
        let mut dy: Option<usize> = None;
        // evaluation points vary with the prime so an unlucky point cannot recur
        let mut r = p / 3;
        while xs.len() < npoints {
            r = (r * 48271 + 11) % p;
            if xs.contains(&r) {
                continue;
            }
            let gr = gamma.eval_mod(r, p);
            if gr == 0 || la.eval_mod(r, p) == 0 || lb.eval_mod(r, p) == 0 {
                continue;
            }
            let g = modp::gcd(&a.eval_x_mod(r, p), &b.eval_x_mod(r, p), p);
            if g.len() == 1 {
                return ZPoly::one();
            }
            let g = modp::scale(&g, gr, p);
            let d = g.len() - 1;
            match dy {
                Some(cur) if d > cur => continue,
                Some(cur) if d < cur => {
                    xs.clear();
                    imgs.clear();
                    dy = Some(d);
                }
                None => dy = Some(d),
                _ => {}
            }
            xs.push(r);
            imgs.push(g);
        }
        let d = dy.unwrap();
        let image: Vec<Vec<u64>> = (0..=d)
            .map(|k| {
                let ys: Vec<u64> = imgs.iter().map(|g| g.get(k).copied().unwrap_or(0)).collect();
                interpolate(&xs, &ys, p)
            })
            .collect();

        let stable = match &mut best {
            Some((bd, _, _)) if d > *bd => continue,
            Some((bd, m, h)) if d == *bd => {
                let next: Vec<Vec<BigInt>> = h
                    .iter()
                    .zip(&image)
                    .map(|(row, img)| row.iter().zip(img).map(|(x, &r)| crt(x, m, r, p)).collect())
                    .collect();
                let same = next == *h;
                *h = next;
                *m *= &pb;
                same
            }
            _ => {
                let h = image
                    .iter()
                    .map(|row| row.iter().map(|&r| symmetric(BigInt::from(r), &pb)).collect())
                    .collect();
                best = Some((d, pb, h));
                false
            }
        };
        if stable {
            let (_, _, h) = best.as_ref().unwrap();
            let rows: Vec<UPoly> = h.iter().map(|r| UPoly::from_coeffs(r.clone())).collect();
            let cand = ZPoly::from_rows(rows);
            let cont = content_y(&cand);
            let cand = cand.div_upoly(&cont).expect("content divides").normalized();
            if a.exact_div(&cand).is_some() && b.exact_div(&cand).is_some() {
                return cand;
            }
        }
    }
    unreachable!("prime list exhausted in bivariate gcd")
}
