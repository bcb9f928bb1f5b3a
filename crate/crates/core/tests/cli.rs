use std::io::Write;
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

fn semiso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_semiso"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn validate(name: &str, v: &Value) {
    let path = format!("{}/schemas/{name}.schema.json", env!("CARGO_MANIFEST_DIR"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    assert!(compiled.is_valid(v), "{name} schema rejects {v}");
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

const F27: &str = "field: p=3 n=3 mod=[1,2,0,1]\n";

#[test]
fn repro_paper_report() {
    let out = semiso(&["repro-paper"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    validate("repro_report", &r);
    validate("verdict", &r["verdict"]);
    assert_eq!(r["all_expectations_met"], true);
    assert_eq!(r["nucleus_middle_size"], 9);
    assert_eq!(r["nucleus_size"], 3);
    assert_eq!(r["verdict"]["verdict"], "inequivalent");
    let mut exps: Vec<u64> = r["alpha_set"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["xi_power"].as_u64().unwrap())
        .collect();
    exps.sort();
    assert_eq!(exps, [91, 273, 455, 637]);
}

#[test]
fn repro_paper_with_other_lambda_and_one_thread() {
    let out = semiso(&["repro-paper", "--lambda-index", "3", "--threads", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["f2_matches_golden"], Value::Null);
    assert_eq!(r["lambda"]["chosen"]["xi_power"], 273);
    assert_eq!(r["verdict"]["verdict"], "inequivalent");
    // λ^2 is a square, hence not in the α set
    let out = semiso(&["repro-paper", "--lambda-index", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn reducible_modulus_is_a_config_error() {
    let out = semiso(&["repro-paper", "--field", "p=3 n=6 mod=[1,0,0,0,0,0,1]"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("reducible"));
}

#[test]
fn repro_mismatch_exits_one() {
    let mut golden: Value = serde_json::from_str(semiso::repro::BUILTIN_GOLDEN).unwrap();
    golden["nucleus_size"] = Value::from(27);
    let g = temp_file(&golden.to_string());
    let out = semiso(&["repro-paper", "--golden", g.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["all_expectations_met"], false);
    assert_eq!(r["mismatches"][0]["item"], "nucleus_size");
}

#[test]
fn code_equiv_exit_codes() {
    let x2 = temp_file(&format!("{F27}x^2\n"));
    let x4 = temp_file(&format!("{F27}x^4\n"));
    let x10 = temp_file(&format!("{F27}x^10\n"));
    let p = |f: &tempfile::NamedTempFile| f.path().to_str().unwrap().to_string();

    let out = semiso(&["code", "equiv", &p(&x4), &p(&x10)]);
    assert_eq!(out.status.code(), Some(0));
    validate("verdict", &json(&out));
    let out = semiso(&["code", "equiv", &p(&x2), &p(&x4)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["witness"].is_object());
    let out = semiso(&["code", "equiv", &p(&x2), &p(&x4), "--max-nodes", "3"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = temp_file(&format!("{F27}x^^2\n"));
    let out = semiso(&["code", "equiv", &p(&bad), &p(&x4)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte"));
    let other = temp_file("field: p=3 n=2 mod=[1,0,1]\nx^2\n");
    let out = semiso(&["code", "equiv", &p(&other), &p(&x4)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn code_json_roundtrip_through_cli() {
    let x2 = temp_file(&format!("{F27}x^2\n"));
    let out = semiso(&["code", "build", x2.path().to_str().unwrap()]);
    let code = json(&out);
    validate("code", &code);
    let c = temp_file(&code.to_string());
    let out = semiso(&["code", "weights", c.path().to_str().unwrap()]);
    let w = json(&out);
    assert_eq!(w["full_weight_words"], 2);
    assert_eq!(w["weight_enumerator"]["27"], 2);
    let out = semiso(&[
        "code",
        "equiv",
        c.path().to_str().unwrap(),
        c.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn planar_subcommand() {
    let out = semiso(&["planar", "--field", "p=3 n=2 mod=[1,0,1]", "--expr", "x^4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["bruteforce"]["planar"], false);
    assert!(r["bruteforce"]["witness"]["missing_difference"].is_object());
    assert_eq!(r["agree"], true);

    let out = semiso(&["planar", "--field", "p=3 n=2 mod=[1,0,1]", "--expr", "x^2"]);
    let r = json(&out);
    assert_eq!(r["bruteforce"]["planar"], true);
    assert_eq!(r["rank_profile"]["2"], 8);
}

#[test]
fn lmptb_semifield_and_interpolate() {
    let out = semiso(&["lmptb"]);
    let f1 = json(&out);
    validate("poly", &f1);
    assert_eq!(
        f1["human"],
        "x^270 - x^246 + x^90 - x^82 - x^54 + x^30 - x^10 - x^2"
    );
    let file = temp_file(&f1.to_string());
    let path = file.path().to_str().unwrap();
    let r = json(&semiso(&["semifield", "nuclei", path]));
    assert_eq!(r["nucleus_middle_size"], 9);
    let r = json(&semiso(&["semifield", "isotope", path, "--lambda", "xi^91"]));
    assert_eq!(r["planar"], true);
    assert_eq!(r["lambda_in_alpha_set"], true);
    validate("poly", &r["polynomial"]);

    let table = temp_file(
        r#"{"field": "p=3 n=2 mod=[1,0,1]", "values": [0, 1, 1, "[0,2]", "[2,0]", "[0,1]", "[0,2]", "[0,1]", "[1,0]"]}"#,
    );
    let out = semiso(&["interpolate", table.path().to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    validate("poly", &json(&out));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(semiso(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(semiso(&["planar"]).status.code(), Some(3));
    assert_eq!(semiso(&["--help"]).status.code(), Some(0));
}

#[test]
fn pretty_output_is_a_table() {
    let out = semiso(&["field", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("generator_order") && l.ends_with("728")));
}
