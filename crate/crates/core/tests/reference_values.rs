//! Known reference values, each checked against an independent computation.

use hilbk::algebra::rational::rat;
use hilbk::algebra::{MultiSeries, RatFunc, Rational, TLaurent, TMonomial, Truncation};
use hilbk::hilb_c2::{zc2_localization, Orders};
use hilbk::macdonald::{global, op_nabla};
use hilbk::partitions::{enumerate, Partition};
use hilbk::symfunc::{op_u, op_ustar, star_inner, SymFunc};
use hilbk::toric::{parse_bundle, z_surface, ToricSurface};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_symfunc(rng: &mut ChaCha8Rng, cap: u32) -> SymFunc {
    let mut f = SymFunc::zero(cap);
    for n in 0..=cap {
        for mu in enumerate(n) {
            if rng.gen_bool(0.6) {
                let c = TLaurent::from_terms([(TMonomial::new(rng.gen_range(-1..=1), rng.gen_range(-1..=1)), rat(rng.gen_range(-3..=3)))]);
                f.add_term(mu, RatFunc::from_laurent(&c));
            }
        }
    }
    f
}

#[test]
fn single_box_eigenvalue_is_minus_one() {
    assert_eq!(Partition::new(vec![1]).nabla_eigenvalue(), TLaurent::from_int(-1));
}

#[test]
fn u_and_ustar_are_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let f = random_symfunc(&mut rng, 3);
        let g = random_symfunc(&mut rng, 3);
        assert_eq!(star_inner(&op_u(&f), &g), star_inner(&f, &op_ustar(&g)));
    }
}

#[test]
fn nabla_is_self_adjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cache = global();
    for _ in 0..5 {
        let f = random_symfunc(&mut rng, 3);
        let g = random_symfunc(&mut rng, 3);
        let lhs = star_inner(&op_nabla(&f, cache).unwrap(), &g);
        let rhs = star_inner(&f, &op_nabla(&g, cache).unwrap());
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn empty_class_series_is_exp_of_q_over_m() {
    let n = 4;
    let z = zc2_localization(&[], &Orders::new(n, 0)).unwrap();
    let mut log = MultiSeries::zero(vec!["q".into()], Truncation::per_variable(vec![n]));
    for k in 1..=n as i64 {
        let den = TLaurent::one_minus(TMonomial::new(k, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, k)));
        let c = RatFunc::new(&TLaurent::constant(Rational::new(1.into(), k.into())), &den).unwrap();
        log.add_term(vec![k as u32], c);
    }
    assert_eq!(z, log.exp().unwrap());
}

#[test]
fn p2_first_line_is_minus_three() {
    let p2 = ToricSurface::p2();
    let z = z_surface(&p2, &[parse_bundle(&p2, "O(1)").unwrap()], &Orders::new(5, 1)).unwrap();
    for n in 1..=5 {
        assert_eq!(z.coeff(&[n, 1]), rat(-3));
    }
}

#[test]
fn p2_wedge_series_is_one_minus_qm_cubed_over_one_minus_q() {
    let p2 = ToricSurface::p2();
    let z = z_surface(&p2, &[parse_bundle(&p2, "O(1)").unwrap()], &Orders::new(5, 5)).unwrap();
    // Σ_k (-m)^k Z(L|k) equals the series in m itself; coefficient of q^n m^j is
    // (-1)^j binom(3, j) for n ≥ j, zero otherwise.
    let binom = [1, 3, 3, 1];
    for n in 0..=5u32 {
        for j in 0..=5u32 {
            let want = if j <= 3 && n >= j { rat(if j % 2 == 0 { 1 } else { -1 } * binom[j as usize]) } else { rat(0) };
            assert_eq!(z.coeff(&[n, j]), want, "q^{n} m^{j}");
        }
    }
}

#[test]
fn p2_virtual_series() {
    use hilbk::toric::closed_forms::check_virtual;
    let p2 = ToricSurface::p2();
    for d in 0..=2 {
        let a = parse_bundle(&p2, &format!("O({d})")).unwrap();
        assert!(check_virtual(&p2, &a, 5).unwrap().matched);
        // the closed form reads 3d q/(1-q) - 9 q^2/(1-q)^2
        let chern = a.chern(&p2).unwrap();
        let k = p2.canonical();
        let c1k = p2.intersect(&chern.c1, &k);
        assert_eq!(-c1k, 3 * d);
        assert_eq!(p2.intersect(&k, &k), 9);
    }
}
