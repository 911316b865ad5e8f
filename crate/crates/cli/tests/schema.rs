//! Checks CLI output against docs/schemas/lambda-forge.schema.json.
//! The validator covers the subset of JSON Schema the file uses.

use std::process::Command;

use serde_json::Value;

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/schemas/lambda-forge.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).expect("schema file")).expect("schema parses")
}

fn resolve<'a>(root: &'a Value, s: &'a Value) -> &'a Value {
    match s.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let name = r.strip_prefix("#/$defs/").expect("local ref");
            resolve(root, &root["$defs"][name])
        }
        None => s,
    }
}

fn type_ok(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        other => panic!("unhandled type {other}"),
    }
}

fn check(root: &Value, s: &Value, v: &Value, path: &str) -> Result<(), String> {
    let s = resolve(root, s);
    if let Some(branches) = s.get("oneOf").and_then(Value::as_array) {
        let ok = branches.iter().filter(|b| check(root, b, v, path).is_ok()).count();
        return if ok == 1 { Ok(()) } else { Err(format!("{path}: {ok} oneOf branches match")) };
    }
    match s.get("type") {
        Some(Value::String(t)) if !type_ok(t, v) => return Err(format!("{path}: expected {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)) => {
            return Err(format!("{path}: expected one of {ts:?}"))
        }
        _ => {}
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    if let (Some(p), Some(x)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
        assert_eq!(p, "^-?[0-9]+(/[0-9]+)?$", "validator only knows the scalar pattern");
        let body = x.strip_prefix('-').unwrap_or(x);
        let good = body.split('/').count() <= 2
            && body.split('/').all(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        if !good {
            return Err(format!("{path}: {x:?} is not an exact scalar"));
        }
    }
    if let Some(o) = v.as_object() {
        for r in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !o.contains_key(r.as_str().unwrap()) {
                return Err(format!("{path}: missing {r}"));
            }
        }
        if let Some(props) = s.get("properties").and_then(Value::as_object) {
            if s.get("additionalProperties") == Some(&Value::Bool(false)) {
                if let Some(k) = o.keys().find(|k| !props.contains_key(*k)) {
                    return Err(format!("{path}: unexpected key {k}"));
                }
            }
            for (k, ps) in props {
                if let Some(x) = o.get(k) {
                    check(root, ps, x, &format!("{path}.{k}"))?;
                }
            }
        }
    }
    if let Some(a) = v.as_array() {
        if let Some(pre) = s.get("prefixItems").and_then(Value::as_array) {
            for (i, (ps, x)) in pre.iter().zip(a).enumerate() {
                check(root, ps, x, &format!("{path}[{i}]"))?;
            }
        } else if let Some(items) = s.get("items") {
            for (i, x) in a.iter().enumerate() {
                check(root, items, x, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn conforms(def: &str, args: &[&str]) {
    let out = Command::new(env!("CARGO_BIN_EXE_lambda-forge"))
        .args(args)
        .arg("--json")
        .output()
        .expect("binary runs");
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|_| panic!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    let root = schema();
    check(&root, &root, &v, "$").unwrap_or_else(|e| panic!("{args:?} envelope: {e}"));
    let def_schema = serde_json::json!({ "$ref": format!("#/$defs/{def}") });
    check(&root, &def_schema, &v["result"], "$.result").unwrap_or_else(|e| panic!("{args:?}: {e}"));
}

#[test]
fn series_commands() {
    conforms("ChiTableResult", &["chi-table", "--n", "4"]);
    conforms("UniversalPolyResult", &["universal-poly", "--kind", "plethysm", "--n", "2", "--m", "2"]);
    conforms("StarComposeResult", &["star-compose", "--f", "0,1,1", "--g", "0,2", "--truncation", "5"]);
    conforms("GammaExpandResult", &["gamma-expand", "--f", "0,1,1", "--weight", "3"]);
    conforms("GammaExpandResult", &["gamma-expand", "--f", "1,1", "--weight", "3", "--multiplicative"]);
    conforms("SigmaResult", &["sigma", "--a", "1,2,3"]);
    conforms("SigmaResult", &["sigma", "--a", "1,1,1/2", "--inverse"]);
    conforms("ClassifyEndoResult", &["classify-endo", "--f", "1,2,1"]);
    conforms("ClassifyEndoResult", &["classify-endo", "--f", "1,3,1"]);
}

#[test]
fn tower_commands() {
    conforms("LimReport", &["tower-analyze", "--kind", "factorial", "--group", "Z", "--depth", "4"]);
    conforms("LimReport", &["tower-analyze", "--kind", "omega", "--group", "Z", "--depth", "4"]);
    conforms("LimReport", &["tower-analyze", "--kind", "omega", "--group", "Q", "--group", "Z/3"]);
    conforms("OmegaLiftResult", &["omega-lift", "--f", "1,1"]);
    conforms("OmegaLiftResult", &["omega-lift", "--f", "0,1,0,0"]);
    conforms("OmegaLiftResult", &["omega-lift", "--f", "1,1", "--depth", "3"]);
    conforms("StableProjectors", &["stable-projectors", "--n", "0", "--k", "2", "--depth", "4", "--truncation", "4"]);
}

#[test]
fn verify_commands() {
    conforms("ReportList", &["verify", "hrr", "--d", "2", "--m", "3"]);
    conforms("ReportList", &["verify", "arr", "--d", "2", "--k", "3", "--m", "-1"]);
    conforms("ReportList", &["verify", "grr", "--space", "P1xP1", "--x", "O(1,1)"]);
    conforms("ReportList", &["verify", "omega-chi", "--n", "2", "--space", "P2"]);
    conforms("ReportList", &["verify", "adams-eigen", "--space", "P2", "--x", "O(1)", "--k", "2"]);
    conforms("AxiomReport", &["verify", "lambda-axioms", "--space", "P2", "--x", "O(1)", "--y", "O(-1)", "--d", "3"]);
    conforms("SuiteResult", &["suite-all", "--only", "1", "--only", "7"]);
}

#[test]
fn validator_rejects_bad_shapes() {
    let root = schema();
    let r = |d: &str| serde_json::json!({ "$ref": format!("#/$defs/{d}") });
    assert!(check(&root, &r("TruncSeries"), &serde_json::json!(["1", "1/2", "-3"]), "$").is_ok());
    assert!(check(&root, &r("TruncSeries"), &serde_json::json!(["1", "0.5"]), "$").is_err());
    assert!(check(&root, &r("LimClass"), &serde_json::json!({"kind": "zero"}), "$").is_ok());
    assert!(check(&root, &r("LimClass"), &serde_json::json!({"kind": "huge"}), "$").is_err());
    assert!(check(&root, &r("Report"), &serde_json::json!({"claim": "x", "lhs": "1", "rhs": "1"}), "$").is_err());
    let env = serde_json::json!({"command": "c", "seed": 1, "passed": true, "result": null, "extra": 0});
    assert!(check(&root, &root, &env, "$").is_err());
}
