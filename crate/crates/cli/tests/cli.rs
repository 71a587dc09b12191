use std::process::{Command, Output};

use serde_json::Value;

fn siegel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(args)
        .env_remove("SIEGEL_PRECISION_BITS")
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    siegel(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    let out = siegel(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["bound", "--p", "11"]), 0);
    assert_eq!(code(&["bound", "--p", "13"]), 2);
    assert_eq!(code(&["bound", "--p", "12"]), 2);
    assert_eq!(code(&["bound"]), 1);
    assert_eq!(code(&["bound", "--p", "11", "--precision", "10"]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["height", "--rational", "1/0"]), 2);
    assert_eq!(code(&["height", "--minpoly", "x^2-"]), 1);
    assert_eq!(code(&["height", "--minpoly", "x^2-1"]), 2);
    assert_eq!(code(&["bound", "--p", "11", "--field", "x^2+1", "--primes", "4"]), 2);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn excluded_prime_suggests_the_subgroup_route() {
    let out = siegel(&["bound", "--p", "13"]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("--level"), "{err}");
}

#[test]
fn rational_height_prints_its_log() {
    let out = stdout(&["height", "--rational", "1728", "--format", "text"]);
    assert!(out.contains("log 1728"), "{out}");
    let out = stdout(&["height", "--rational", "-1/1728", "--format", "text"]);
    assert!(out.contains("log 1728"), "{out}");
}

#[test]
fn golden_ratio_height() {
    let v = json(&["height", "--minpoly", "x^2-x-1", "--no-timestamp"]);
    assert_eq!(v["value"]["lo_decimal"], "2.40605912529802e-1");
}

#[test]
fn reports_are_deterministic_without_timestamp() {
    let args = ["bound", "--p", "11", "--no-timestamp"];
    let a = stdout(&args);
    assert_eq!(a, stdout(&args));
    assert!(!a.contains("generated_at"));
    assert!(json(&["bound", "--p", "11"])["generated_at"].is_u64());
}

#[test]
fn headline_bound_at_eleven() {
    let v = json(&["bound", "--p", "11", "--no-timestamp"]);
    let e = &v["report"]["entries"];
    assert_eq!(e["log_simplified"]["lo_decimal"], "3.18523909212258e5");
    assert_eq!(e["log_precise"]["lo_decimal"], "6.97532277391682e3");
    assert_eq!(v["all_true"], true);
    for (_, verdict) in v["report"]["verdicts"].as_object().unwrap() {
        assert_eq!(verdict, "True");
    }
}

#[test]
fn bound_over_a_quadratic_field() {
    let v = json(&["bound", "--p", "11", "--field", "x^2+1", "--primes", "5", "--no-timestamp"]);
    assert_eq!(v["places"]["s"], 3);
    assert_eq!(v["places"]["ell"], 5);
    assert_eq!(v["all_true"], true);
}

#[test]
fn subgroup_route_needs_three_cusps() {
    assert_eq!(code(&["bound", "--level", "11"]), 2);
    let v = json(&["bound", "--level", "30", "--no-timestamp"]);
    assert_eq!(v["v_infinity"], 8);
    assert_eq!(v["level_m"], 30);
    assert_eq!(code(&["bound", "--level", "11", "--kind", "gamma1"]), 2);
}

#[test]
fn cusps_of_the_cover_at_eleven() {
    let v = json(&["cusps", "--kind", "gamma-tilde", "--p", "11", "--no-timestamp"]);
    assert!(v["v_infinity"].as_u64().unwrap() >= 3);
    assert_eq!(v["degree_over_gamma0"], 5);
    assert_eq!(v["etale_at_cusps"], true);
    let g0 = json(&["cusps", "--kind", "gamma0", "--p", "11", "--no-timestamp"]);
    assert_eq!(g0["v_infinity"], 2);
    assert_eq!(g0["index"], 12);
}

#[test]
fn cm_scan_at_eleven() {
    let v = json(&["scan", "--p", "11", "--cm", "--no-timestamp"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    let mut on_curve: Vec<&str> = rows
        .iter()
        .filter(|r| !r["partners"].as_array().unwrap().is_empty())
        .map(|r| {
            assert_eq!(r["verdict"], "True");
            assert_eq!(r["symmetric"], true);
            r["j0"].as_str().unwrap()
        })
        .collect();
    on_curve.sort_unstable();
    assert_eq!(
        on_curve,
        ["-32768/1", "-3375/1", "-884736/1", "-884736000/1", "16581375/1", "8000/1"]
    );
}

#[test]
fn scan_requires_s_integers() {
    assert_eq!(code(&["scan", "--p", "11", "--j", "1/2"]), 2);
    assert_eq!(code(&["scan", "--p", "11", "--j", "1/2", "--primes", "2"]), 0);
}

#[test]
fn compare_emits_csv() {
    let out = stdout(&["compare", "--p-min", "11", "--p-max", "19"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 4, "{out}");
    assert!(lines[0].starts_with("p,"));
    assert!(lines[1].starts_with("11,"));
    assert!(lines[3].starts_with("19,"));
}

#[test]
fn modpoly_verifies() {
    let v = json(&["modpoly", "--p", "3", "--verify", "--no-timestamp"]);
    assert_eq!(v["p"], 3);
    assert_eq!(code(&["modpoly", "--p", "17"]), 2);
}

#[test]
fn precision_from_environment_and_config() {
    let out = Command::new(env!("CARGO_BIN_EXE_siegel"))
        .args(["bound", "--p", "11", "--no-timestamp"])
        .env("SIEGEL_PRECISION_BITS", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let dir = std::env::temp_dir().join(format!("siegel-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"p": 11, "precision_bits": 512, "no_timestamp": true}"#).unwrap();
    let v = json(&["bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(v["report"]["precision_bits"], 512);
    assert!(v.get("generated_at").is_none());
    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(code(&["bound", "--config", cfg.to_str().unwrap()]), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
