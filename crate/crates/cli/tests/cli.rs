use std::process::{Command, Output};

fn hilbk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbk")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn malformed_class_is_a_usage_error() {
    let o = hilbk(&["zc2", "--classes", "t1+++"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn zc2_output_is_deterministic_json() {
    let args = ["zc2", "--classes", "t1 + t2^-1", "--qmax", "2", "--mmax", "2", "--jobs", "2"];
    let a = hilbk(&args);
    let b = hilbk(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["vars"], serde_json::json!(["q", "m1"]));
}

#[test]
fn dual_check_passes() {
    let o = hilbk(&["zc2", "--classes", "t1*t2^-1", "--qmax", "2", "--mmax", "1", "--dual-check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dual check: pass"));
}

#[test]
fn empty_surface_series_is_all_ones() {
    let o = hilbk(&["zsurface", "--surface", "P2", "--qmax", "5"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let coeffs = v["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), 6);
    for c in coeffs {
        assert_eq!(c["num"], "1");
        assert_eq!(c["den"], "1");
    }
}

#[test]
fn unknown_surface_is_a_usage_error() {
    assert_eq!(code(&hilbk(&["zsurface", "--surface", "P3"])), 2);
}

#[test]
fn single_config_is_rank_deficient() {
    let o = hilbk(&["universal", "--ranks", "1", "--configs", "P2:O(0)"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn universal_defaults_have_zero_residual() {
    let o = hilbk(&["universal", "--ranks", "1", "--qmax", "2", "--mmax", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["residual"], "0");
    assert!(v["log_series"]["D_1"].is_object());
}

#[test]
fn wrong_roles_fail_verification() {
    let o = hilbk(&["verify", "--suite", "macdonald", "--max-size", "2", "--force-roles", "t1,t2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("[FAIL]"));
}

#[test]
fn verify_reports_json() {
    let o = hilbk(&["verify", "--suite", "toric", "--qmax", "2", "--mmax", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn config_file_supplies_arguments() {
    let dir = std::env::temp_dir().join(format!("hilbk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    let out = dir.join("z.json");
    std::fs::write(&cfg, "command = zsurface\nsurface = P1xP1\nqmax = 2\n").unwrap();
    let o = hilbk(&["--output", out.to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["trunc"], serde_json::json!([2]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn latex_table() {
    let o = hilbk(&["zsurface", "--surface", "P2", "--bundle", "O(1)", "--qmax", "1", "--mmax", "1", "--latex"]);
    assert_eq!(code(&o), 0);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.starts_with("\\begin{tabular}"));
    assert!(s.contains("$(1, 1)$ & $-3$"));
}

fn coeff_map(v: &serde_json::Value) -> std::collections::BTreeMap<Vec<u64>, (String, String)> {
    v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            let e = c["exp"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
            (e, (c["num"].as_str().unwrap().to_string(), c["den"].as_str().unwrap().to_string()))
        })
        .collect()
}

#[test]
fn empty_classes_give_the_exponential_series() {
    use hilbk::algebra::{MultiSeries, RatFunc, Rational, TLaurent, TMonomial, Truncation};
    let o = hilbk(&["zc2", "--classes", "", "--qmax", "4"]);
    assert_eq!(code(&o), 0);
    let got = MultiSeries::<RatFunc>::from_json(std::str::from_utf8(&o.stdout).unwrap()).unwrap();
    let mut log = MultiSeries::zero(vec!["q".into()], Truncation::per_variable(vec![4]));
    for k in 1..=4i64 {
        let den = TLaurent::one_minus(TMonomial::new(k, 0)).mul(&TLaurent::one_minus(TMonomial::new(0, k)));
        log.add_term(vec![k as u32], RatFunc::new(&TLaurent::constant(Rational::new(1.into(), k.into())), &den).unwrap());
    }
    assert_eq!(got, log.exp().unwrap());
}

#[test]
fn f1_empty_series_is_all_ones() {
    let o = hilbk(&["zsurface", "--surface", "F1", "--qmax", "3"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = coeff_map(&v);
    assert_eq!(m.len(), 4);
    assert!(m.values().all(|c| c == &("1".to_string(), "1".to_string())));
}

#[test]
fn p2_line_bundle_matches_wedge_form() {
    let o = hilbk(&["zsurface", "--surface", "P2", "--bundle", "O(1)", "--qmax", "4", "--mmax", "3"]);
    assert_eq!(code(&o), 0);
    let m = coeff_map(&serde_json::from_slice(&o.stdout).unwrap());
    let binom = [1i64, 3, 3, 1];
    for n in 0..=4u64 {
        for j in 0..=3u64 {
            let want = if n >= j { binom[j as usize] * if j % 2 == 0 { 1 } else { -1 } } else { 0 };
            let got = m.get(&vec![n, j]).map(|(num, den)| {
                assert_eq!(den, "1");
                num.parse::<i64>().unwrap()
            });
            assert_eq!(got.unwrap_or(0), want, "q^{n} m^{j}");
        }
    }
}

#[test]
fn universal_a_series_is_geometric() {
    let o = hilbk(&["universal", "--ranks", "1", "--qmax", "3", "--mmax", "1"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = coeff_map(&v["series"]["A"]);
    for n in 0..=3u64 {
        assert_eq!(a[&vec![n, 0]], ("1".to_string(), "1".to_string()));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let base = ["zsurface", "--surface", "P1xP1", "--bundle", "O(1,1)", "--qmax", "3", "--mmax", "2"];
    let one = hilbk(&[&["--jobs", "1"], &base[..]].concat());
    let four = hilbk(&[&["--jobs", "4"], &base[..]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
}
