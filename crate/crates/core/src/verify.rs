//! Verification suites shared by the command line and the tests.

use serde::Serialize;

use crate::error::Result;
use crate::hilb_c2::{
    extract_g, extract_gtilde_in, symmetry_sides, zc2_linebundle_in, zc2_localization, zc2_macdonald_in, EqClassC2, Orders,
};
use crate::macdonald::{certify_orthogonality, sample_rank, videntity_sides, MacdonaldCache};
use crate::partitions::enumerate;
use crate::toric::closed_forms::{check_polynomial, closed_form_suite};
use crate::toric::{parse_bundle, ToricSurface};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub suite: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(suite: &str, name: impl Into<String>, r: Result<bool>, ok: &str) -> Self {
        let (passed, detail) = match r {
            Ok(true) => (true, ok.to_string()),
            Ok(false) => (false, "mismatch".to_string()),
            Err(e) => (false, e.to_string()),
        };
        Check { suite: suite.into(), name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest partition size for the Macdonald gates.
    pub max_size: u32,
    /// Total degree of the exchange-symmetry check.
    pub degree: u32,
    pub q: u32,
    pub m: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { max_size: 4, degree: 4, q: 6, m: 3 }
    }
}

pub const SUITES: [&str; 4] = ["macdonald", "symmetry", "descendents", "toric"];

/// Class inputs used by the `C^2` suites.
pub fn sample_class_sets() -> Vec<Vec<&'static str>> {
    vec![
        vec!["t1"],
        vec!["t1*t2"],
        vec!["t1 + t2^-1"],
        vec!["2 - t1*t2^2"],
        vec!["t2^-1", "t1 - t2"],
        vec!["t1^2*t2^-1", "3"],
    ]
}

fn classes(set: &[&str]) -> Result<Vec<EqClassC2>> {
    set.iter().map(|s| EqClassC2::parse(s)).collect()
}

pub fn run_suite(suite: &str, opts: &VerifyOptions, cache: &MacdonaldCache) -> Result<Vec<Check>> {
    match suite {
        "macdonald" => Ok(macdonald_suite(opts, cache)),
        "symmetry" => symmetry_suite(opts, cache),
        "descendents" => descendents_suite(opts, cache),
        "toric" => toric_suite(opts),
        "all" => {
            let mut out = Vec::new();
            for s in SUITES {
                out.extend(run_suite(s, opts, cache)?);
            }
            Ok(out)
        }
        other => Err(crate::Error::Parse(format!("unknown suite {other:?}"))),
    }
}

fn macdonald_suite(opts: &VerifyOptions, cache: &MacdonaldCache) -> Vec<Check> {
    let mut out = Vec::new();
    for n in 0..=opts.max_size {
        let r = cache.degree(n).map(|b| sample_rank(&b, n) == b.len());
        out.push(Check::new("macdonald", format!("certified basis of degree {n}"), r, "H[1] = 1, H[1-x] factors, full rank"));
        if n <= 4 {
            let r = cache.degree(n).and_then(|b| certify_orthogonality(&b)).map(|_| true);
            out.push(Check::new("macdonald", format!("star orthogonality in degree {n}"), r, "diagonal with H[-1]·C"));
        }
    }
    for n in 0..=opts.max_size.min(3) {
        let r = enumerate(n).iter().try_fold(true, |acc, l| videntity_sides(l, n + 1, cache).map(|(a, b)| acc && a == b));
        out.push(Check::new("macdonald", format!("nabla identity in degree {n}"), r, "matches the normalized exponential"));
    }
    out
}

fn symmetry_suite(opts: &VerifyOptions, cache: &MacdonaldCache) -> Result<Vec<Check>> {
    let sets = [vec!["t1 - t2^2"], vec!["t1*t2^-1", "2 + t2"], vec!["-t1^2 + t1*t2"]];
    let mut out = Vec::new();
    for set in sets {
        let c = classes(&set)?;
        let r = symmetry_sides(&c, opts.degree, cache).map(|(a, b)| a == b);
        out.push(Check::new("symmetry", format!("exchange symmetry for {set:?}"), r, &format!("through total degree {}", opts.degree)));
    }
    Ok(out)
}

fn descendents_suite(opts: &VerifyOptions, cache: &MacdonaldCache) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (q, m) = (opts.q.min(5), opts.m.min(3));
    for set in sample_class_sets() {
        let c = classes(&set)?;
        let o = Orders::new(q, m);
        let r = (|| {
            let z = zc2_localization(&c, &o)?;
            let mut same = zc2_macdonald_in(&c, &o, cache)? == z;
            if c[0].char0.as_unit_monomial().is_some() {
                same &= zc2_linebundle_in(&c, &o, cache)? == z;
            }
            Ok(same)
        })();
        out.push(Check::new("descendents", format!("routes agree for {set:?}"), r, &format!("through q^{q}, total m^{m}")));
    }
    for set in [vec!["t1 + t2^-1"], vec!["t2^-1", "t1 - t2"]] {
        let c = classes(&set)?;
        let exps: Vec<Vec<u32>> = if c.len() == 1 { (0..=3).map(|a| vec![a]).collect() } else { vec![vec![1, 1], vec![2, 1], vec![1, 2]] };
        let o = Orders::new(6, 3);
        let z = zc2_localization(&c, &o)?;
        for a in exps {
            let r = extract_g(&z, &a).map(|e| e.degree_bound_ok && e.polynomiality_ok);
            out.push(Check::new("descendents", format!("g_{a:?} for {set:?} is a polynomial"), r, "degree at most |a|"));
        }
    }
    let c = classes(&["t1*t2^-1", "t2 - 2*t1"])?;
    let o = Orders { q: 4, m_total: 5, m_each: Some(vec![4, 1]) };
    let r = zc2_localization(&c, &o).and_then(|z| extract_gtilde_in(&z, &c, &[1], cache)).map(|cert| cert.denominators_binomial);
    out.push(Check::new("descendents", "rationality certificate", r, "finite sum matches through q^4 m1^4"));
    Ok(out)
}

fn toric_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let q = opts.q.min(5);
    let p2 = ToricSurface::p2();
    let pp = ToricSurface::p1xp1();
    let f1 = ToricSurface::hirzebruch(1)?;
    for s in [&p2, &pp, &f1] {
        out.push(Check::new("toric", format!("structure sheaf gate on {}", s.name), Ok(s.chi_o() == 1), "localization sum is 1"));
    }
    let gate = (-3..=4).all(|d| {
        let l = parse_bundle(&p2, &format!("O({d})")).and_then(|c| p2.euler_char(&c.chars));
        l.ok() == Some((d + 1) * (d + 2) / 2)
    });
    out.push(Check::new("toric", "line bundles on P2", Ok(gate), "(d+1)(d+2)/2"));
    let v = parse_bundle(&p2, "sum:O(0)+O(1)+O(2)")?;
    let checks = closed_form_suite(&p2, &parse_bundle(&p2, "O(1)")?, &parse_bundle(&p2, "O(2)")?, &[v], q)?;
    for c in checks {
        out.push(Check { suite: "toric".into(), name: format!("{} on {}", c.name, c.surface), passed: c.matched, detail: c.mismatch.unwrap_or(c.through) });
    }
    for (s, b) in [(&pp, "O(1,1)"), (&f1, "O(0,1)")] {
        let a = parse_bundle(s, b)?;
        let r = check_polynomial(s, &[a], &[2], 3).map(|(ok, _)| ok);
        out.push(Check::new("toric", format!("polynomial numerator on {} for {b}", s.name), r, "degree at most 2"));
    }
    Ok(out)
}
