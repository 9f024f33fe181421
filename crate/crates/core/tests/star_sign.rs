//! The star pairing needs the sign `(-1)^{ℓ(μ)}`; the sign `(-1)^{|μ|}`
//! breaks orthogonality with the expected norms from degree two on.

use hilbk::algebra::rational::rat;
use hilbk::algebra::{RatFunc, Rational, TLaurent, TMonomial};
use hilbk::macdonald::{certify_orthogonality, global};
use hilbk::partitions::Partition;
use hilbk::symfunc::{diagonal_pairing, star_norm};

fn size_signed_norm(mu: &Partition) -> RatFunc {
    let sign = if mu.size().is_multiple_of(2) { 1 } else { -1 };
    let z = Rational::from_integer(mu.z_lambda()) * rat(sign);
    let l = mu.parts().iter().fold(TLaurent::constant(z), |acc, &k| {
        let k = k as i64;
        acc.mul(&TLaurent::one_minus(TMonomial::new(k, 0))).mul(&TLaurent::one_minus(TMonomial::new(0, k)))
    });
    RatFunc::from_laurent(&l)
}

fn diagonal_ok(n: u32, norm: impl Fn(&Partition) -> RatFunc + Copy) -> bool {
    global().degree(n).unwrap().iter().all(|(lam, h)| {
        let want = RatFunc::from_laurent(&lam.nabla_eigenvalue().mul(&lam.c_lambda()));
        diagonal_pairing(h, h, norm) == want
    })
}

#[test]
fn length_sign_gives_expected_norms() {
    for n in 0..=4 {
        certify_orthogonality(&global().degree(n).unwrap()).unwrap();
        assert!(diagonal_ok(n, star_norm));
    }
}

#[test]
fn size_sign_fails_in_degree_two() {
    assert!(diagonal_ok(1, size_signed_norm));
    assert!(!diagonal_ok(2, size_signed_norm));
}
