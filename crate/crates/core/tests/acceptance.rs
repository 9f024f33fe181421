//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons only.
//! Run with `cargo test -p hilbk-core --release --test acceptance`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hilbk::algebra::rational::rat;
use hilbk::algebra::{RatFunc, TLaurent, TMonomial};
use hilbk::hilb_c2::{extract_g, symmetry_sides, zc2_linebundle, zc2_localization, zc2_macdonald, EqClassC2, Orders};
use hilbk::macdonald::{certify_orthogonality, certify_single, global, sample_rank, videntity_sides};
use hilbk::partitions::enumerate;
use hilbk::symfunc::star_inner;
use hilbk::toric::closed_forms::{check_polynomial, check_rank_three, check_rank_three_product, check_virtual, closed_form_suite};
use hilbk::toric::{default_configs, parse_bundle, universal_extract, z_surface, EqClassS, ToricSurface};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_class(rng: &mut ChaCha8Rng) -> EqClassC2 {
    loop {
        let n = rng.gen_range(1..=3);
        let terms = (0..n).map(|_| {
            let m = TMonomial::new(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            let c = [-2, -1, 1, 2, 3][rng.gen_range(0..5)];
            (m, rat(c))
        });
        let l = TLaurent::from_terms(terms);
        if !l.is_zero() {
            return EqClassC2::new(l);
        }
    }
}

fn random_monomial(rng: &mut ChaCha8Rng) -> EqClassC2 {
    EqClassC2::new(TLaurent::monomial(rng.gen_range(-2..=2), rng.gen_range(-2..=2)))
}

fn macdonald_certification() -> Outcome {
    let cache = global();
    let mut count = 0;
    for n in 0..=5 {
        let basis = cache.degree(n).map_err(|e| e.to_string())?;
        ensure(basis.len() == enumerate(n).len(), format!("degree {n} basis has {} elements", basis.len()))?;
        ensure(sample_rank(&basis, n) == basis.len(), format!("degree {n} basis is not independent"))?;
        for (lam, h) in &basis {
            certify_single(lam, h).map_err(|e| e.to_string())?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions with |λ| ≤ 5"))
}

fn star_orthogonality() -> Outcome {
    let cache = global();
    let all = cache.upto(4, 4).map_err(|e| e.to_string())?;
    for n in 0..=4 {
        certify_orthogonality(&cache.degree(n).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    }
    let mut cross = 0;
    for (l, hl) in &all {
        for (m, hm) in &all {
            if l.size() != m.size() {
                ensure(star_inner(hl, hm) == RatFunc::zero(), format!("pairing of {l} and {m} is nonzero"))?;
                cross += 1;
            }
        }
    }
    Ok(format!("{} partitions, {cross} cross-degree pairs", all.len()))
}

fn nabla_identity() -> Outcome {
    let cache = global();
    let mut count = 0;
    for n in 0..=4 {
        for lam in enumerate(n) {
            let (a, b) = videntity_sides(&lam, n + 1, cache).map_err(|e| e.to_string())?;
            ensure(a == b, format!("mismatch for {lam}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions with |λ| ≤ 4"))
}

fn exchange_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..3 {
        let classes: Vec<EqClassC2> = (0..1 + i % 2).map(|_| random_class(&mut rng)).collect();
        let (a, b) = symmetry_sides(&classes, 4, global()).map_err(|e| e.to_string())?;
        ensure(a == b, format!("asymmetric for {:?}", classes.iter().map(|c| c.char0.to_string()).collect::<Vec<_>>()))?;
    }
    Ok("3 random sets through total degree 4".into())
}

fn dual_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let orders = Orders::new(5, 3);
    let mut with_line = 0;
    for i in 0..12 {
        let l = 1 + i % 2;
        let mut classes: Vec<EqClassC2> = (0..l).map(|_| random_class(&mut rng)).collect();
        if i % 3 == 0 {
            classes[0] = random_monomial(&mut rng);
        }
        let z = zc2_localization(&classes, &orders).map_err(|e| e.to_string())?;
        ensure(zc2_macdonald(&classes, &orders).map_err(|e| e.to_string())? == z, format!("Macdonald route differs on input {i}"))?;
        if classes[0].char0.as_unit_monomial().is_some() {
            ensure(zc2_linebundle(&classes, &orders).map_err(|e| e.to_string())? == z, format!("line-bundle route differs on input {i}"))?;
            with_line += 1;
        }
    }
    Ok(format!("12 random inputs through q^5, total m^3; {with_line} also via the line-bundle route"))
}

fn descendent_polynomiality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut count = 0;
    for l in 1..=2usize {
        let classes: Vec<EqClassC2> = (0..l).map(|_| random_class(&mut rng)).collect();
        let z = zc2_localization(&classes, &Orders::new(6, 3)).map_err(|e| e.to_string())?;
        let exps: Vec<Vec<u32>> = if l == 1 {
            (0..=3).map(|a| vec![a]).collect()
        } else {
            (0..=3).flat_map(|a| (0..=3 - a).map(move |b| vec![a, b])).collect()
        };
        for a in exps {
            let e = extract_g(&z, &a).map_err(|e| e.to_string())?;
            ensure(e.degree_bound_ok && e.polynomiality_ok, format!("g_{a:?} is not a polynomial of degree ≤ |a|"))?;
            count += 1;
        }
    }
    Ok(format!("{count} exponent vectors through q^6"))
}

fn surface_polynomiality() -> Outcome {
    let surfaces = [ToricSurface::p2(), ToricSurface::p1xp1(), ToricSurface::hirzebruch(1).map_err(|e| e.to_string())?];
    let bundles = [("O(1)", "sum:O(2)-O(0)"), ("O(1,1)", "sum:O(1,0)+O(0,2)"), ("O(0,1)", "sum:O(1,1)-O(1,0)")];
    let mut count = 0;
    for (s, (b1, b2)) in surfaces.iter().zip(bundles) {
        let a1 = parse_bundle(s, b1).map_err(|e| e.to_string())?;
        let a2 = parse_bundle(s, b2).map_err(|e| e.to_string())?;
        let mut cases: Vec<(Vec<EqClassS>, Vec<u32>)> = (0..=3).map(|k| (vec![a1.clone()], vec![k])).collect();
        for k in [[1, 1], [2, 1], [1, 2]] {
            cases.push((vec![a1.clone(), a2.clone()], k.to_vec()));
        }
        for (classes, k) in cases {
            let (ok, _) = check_polynomial(s, &classes, &k, 3).map_err(|e| e.to_string())?;
            ensure(ok, format!("{} with k = {k:?} is not a polynomial", s.name))?;
            count += 1;
        }
    }
    Ok(format!("{count} cases on P2, P1xP1, F1 through q^(Σk+3)"))
}

fn closed_forms() -> Outcome {
    let p2 = ToricSurface::p2();
    let mut count = 0;
    let battery = [("P2", "O(1)", "O(2)"), ("P1xP1", "O(1,0)", "O(1,2)"), ("F1", "O(0,1)", "O(1,1)")];
    for (name, l, a) in battery {
        let s = ToricSurface::parse(name).map_err(|e| e.to_string())?;
        let l = parse_bundle(&s, l).map_err(|e| e.to_string())?;
        let a = parse_bundle(&s, a).map_err(|e| e.to_string())?;
        for c in closed_form_suite(&s, &l, &a, &[], 5).map_err(|e| e.to_string())? {
            ensure(c.matched, format!("{} on {}: {:?}", c.name, c.surface, c.mismatch))?;
            count += 1;
        }
    }
    for v in ["sum:O(0)+O(1)+O(2)", "sum:O(1)+O(1)+O(-1)", "sum:O(2)+O(0)+O(-2)"] {
        let v = parse_bundle(&p2, v).map_err(|e| e.to_string())?;
        for c in [check_rank_three(&p2, &v, 5), check_rank_three_product(&p2, &v, 5)] {
            let c = c.map_err(|e| e.to_string())?;
            ensure(c.matched, format!("{}: {:?}", c.name, c.mismatch))?;
            count += 1;
        }
    }
    for d in 0..=2 {
        let a = parse_bundle(&p2, &format!("O({d})")).map_err(|e| e.to_string())?;
        let c = check_virtual(&p2, &a, 5).map_err(|e| e.to_string())?;
        ensure(c.matched, format!("virtual structure sheaf for O({d}): {:?}", c.mismatch))?;
        count += 1;
    }
    Ok(format!("{count} closed forms through q^5"))
}

fn universal_residual() -> Outcome {
    let configs = default_configs(&[1]).map_err(|e| e.to_string())?;
    ensure(configs.len() >= 6, "fewer than 6 configurations")?;
    let u = universal_extract(&[1], &configs, &Orders::new(3, 3)).map_err(|e| e.to_string())?;
    ensure(u.residual == rat(0), format!("residual {}", u.residual))?;
    Ok(format!("{} configurations through (q^3, m^3), residual 0", configs.len()))
}

fn toric_gates() -> Outcome {
    let p2 = ToricSurface::p2();
    for d in -3..=4i64 {
        let c = parse_bundle(&p2, &format!("O({d})")).map_err(|e| e.to_string())?;
        let chi = p2.euler_char(&c.chars).map_err(|e| e.to_string())?;
        ensure(chi == (d + 1) * (d + 2) / 2, format!("χ(P2, O({d})) = {chi}"))?;
    }
    let pp = ToricSurface::p1xp1();
    for a in 0..=3i64 {
        for b in 0..=3i64 {
            let c = parse_bundle(&pp, &format!("O({a},{b})")).map_err(|e| e.to_string())?;
            let chi = pp.euler_char(&c.chars).map_err(|e| e.to_string())?;
            ensure(chi == (a + 1) * (b + 1), format!("χ(P1xP1, O({a},{b})) = {chi}"))?;
        }
    }
    let mut series = 0;
    for (name, bundles) in [("P2", vec!["O(-2)", "sum:O(3)-O(1)"]), ("P1xP1", vec!["O(2,-1)", "K"]), ("F1", vec!["O(1,-1)", "sum:O(0,1)+O(2,1)"])] {
        let s = ToricSurface::parse(name).map_err(|e| e.to_string())?;
        for b in bundles {
            let c = parse_bundle(&s, b).map_err(|e| e.to_string())?;
            z_surface(&s, &[c], &Orders::new(4, 3)).map_err(|e| format!("{name} {b}: {e}"))?;
            series += 1;
        }
    }
    Ok(format!("Euler characteristics match; {series} surface series pole-free"))
}

/// Bypasses the test harness capture so the lines show in every run.
fn report(line: String) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{line}");
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Macdonald certification", macdonald_certification),
        ("star orthogonality", star_orthogonality),
        ("nabla identity", nabla_identity),
        ("exchange symmetry", exchange_symmetry),
        ("dual oracle equivalence", dual_oracles),
        ("descendent polynomiality on C^2", descendent_polynomiality),
        ("polynomiality on toric surfaces", surface_polynomiality),
        ("closed forms", closed_forms),
        ("universal residual", universal_residual),
        ("toric gates", toric_gates),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(d) => report(format!("[PASS] {:>2}. {name}: {d} ({secs:.1}s)", i + 1)),
            Err(d) => {
                report(format!("[FAIL] {:>2}. {name}: {d} ({secs:.1}s)", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
