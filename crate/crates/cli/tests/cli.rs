use std::process::{Command, Output};

use lambda_forge::LimReport;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn chi_table_json() {
    let v = json(&["chi-table", "--n", "3"]);
    let shown: Vec<&str> = v["result"].as_array().unwrap().iter().map(|r| r["display"].as_str().unwrap()).collect();
    assert_eq!(shown, ["c1", "-2*c2 + c1^2", "3*c3 - 3*c1*c2 + c1^3"]);
    assert_eq!(v["seed"], 20240611);
}

#[test]
fn hrr_single_case() {
    let v = json(&["verify", "hrr", "--d", "2", "--m", "0"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["result"][0]["lhs"], "1");
    assert_eq!(v["result"][0]["rhs"], "1");
    let v = json(&["verify", "hrr", "--d", "3", "--m", "-5"]);
    // C(-2, 3) = (-2)(-3)(-4)/6
    assert_eq!(v["result"][0]["lhs"], "-4");
}

#[test]
fn factorial_tower_report_round_trips() {
    let v = json(&["tower-analyze", "--kind", "factorial", "--group", "Z"]);
    let r = &v["result"];
    assert_eq!(r["lim"]["kind"], "zero");
    assert_eq!(r["r1lim"]["kind"], "hat_z_mod_z");
    assert_eq!(r["mittag_leffler"]["status"], "no");
    let rep: LimReport = serde_json::from_value(r.clone()).unwrap();
    assert_eq!(serde_json::to_value(&rep).unwrap(), *r);
}

#[test]
fn star_compose_table_shows_product_exponent() {
    let out = run(&["star-compose", "--f", "psi:2", "--g", "psi:3", "--truncation", "8"]);
    assert!(out.status.success());
    let s = stdout(&out);
    assert!(s.contains("f * g = [1, 6, 15, 20, 15, 6, 1, 0, 0]"), "{s}");
    assert!(s.contains("seed 20240611"));
}

#[test]
fn arr_sweep_csv_has_one_row_per_case() {
    let out = run(&["verify", "arr", "--d-max", "2", "--k-set", "2,3", "--m-range=-2..2", "--csv"]);
    assert!(out.status.success());
    let s = stdout(&out);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "seed,d,k,m,equal,lhs,rhs");
    assert_eq!(lines.len() - 1, 2 * 2 * 5);
    assert!(lines[1..].iter().all(|l| l.starts_with("20240611,") && l.contains(",true,")));
}

#[test]
fn json_is_byte_identical_and_independent_of_pool_size() {
    let args = ["suite-all", "--only", "1,7,12", "--json", "--seed", "5"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_lambda-forge"))
        .args(args)
        .env("LAMBDA_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 5);
    assert_eq!(v["result"].as_array().unwrap().len(), 3);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["bogus"],
        vec!["verify", "hrr", "--d", "x"],
        vec!["star-compose", "--f", "1,q", "--g", "psi:1"],
        vec!["tower-analyze", "--kind", "omega", "--group", "Z/0"],
        vec!["chi-table", "--json", "--csv"],
        vec!["verify", "grr", "--space", "P2", "--x", "[O(1,1)]"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn lambda_axioms_pass_on_parsed_elements() {
    let v = json(&["verify", "lambda-axioms", "--space", "P^1xP^1", "--x", "[O(1,-1)] + -2[O(0,1)]", "--y", "3[O(2,0)]", "--d", "3"]);
    assert_eq!(v["result"]["all_passed"], true);
    assert_eq!(v["passed"], true);
}

#[test]
fn omega_lift_over_integers_and_fp() {
    let v = json(&["omega-lift", "--f", "0,1", "--depth", "2"]);
    assert_eq!(v["result"]["result"], "obstruction");
    let v = json(&["omega-lift", "--f", "1,1", "--depth", "4"]);
    assert_eq!(v["result"]["result"], "chain");
    assert_eq!(v["result"]["levels"].as_array().unwrap().len(), 5);
    let v = json(&["omega-lift", "--f", "1,1", "--prime", "3", "--truncation", "5"]);
    assert_eq!(v["result"]["result"], "lift");
}

#[test]
fn classify_endo_reports_exponent_or_witness() {
    let v = json(&["classify-endo", "--f", "psi:-3"]);
    assert_eq!(v["result"]["classification"]["exponent"], -3);
    let v = json(&["classify-endo", "--f", "1,1,1"]);
    let w = &v["result"]["classification"]["witness"];
    assert_eq!(w["monomial"], "U^1 V^1");
}

#[test]
fn stable_projectors_checks_pass() {
    let v = json(&["stable-projectors", "--n", "2", "--k", "3", "--depth", "4", "--truncation", "4"]);
    assert!(v["result"]["checks"].as_array().unwrap().iter().all(|c| c["equal"] == true));
}

#[test]
fn sigma_and_inverse() {
    let v = json(&["sigma", "--a", "1,2,4,8,16", "--truncation", "4"]);
    assert_eq!(v["result"]["series"], serde_json::json!(["1", "2", "1", "0", "0"]));
    let v = json(&["sigma", "--a", "psi:-1", "--truncation", "4", "--inverse"]);
    assert_eq!(v["result"]["sequence"], serde_json::json!(["1", "-1", "1", "-1", "1"]));
}
