//! End-to-end runs of the binary: documented examples, exit codes, file
//! formats. Every assertion here goes through the real executable.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn realpv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realpv")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout_json(out: &Output) -> Value {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn module_file(dir: &TempDir, name: &str, field: &str, rows: &[&[&str]]) -> PathBuf {
    let matrix: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    let body = serde_json::json!({ "field": field, "matrix": matrix });
    let path = dir.path().join(name);
    fs::write(&path, body.to_string()).unwrap();
    path
}

fn so3_cocycle_file(dir: &TempDir, name: &str, diag: &[&str]) -> PathBuf {
    let body = serde_json::json!({
        "group": { "type": "SO", "form": [["1","0","0"],["0","1","0"],["0","0","1"]] },
        "matrix": [[diag[0],"0","0"],["0",diag[1],"0"],["0","0",diag[2]]],
    });
    let path = dir.path().join(name);
    fs::write(&path, body.to_string()).unwrap();
    path
}

#[test]
fn flat_solves_simple_poles() {
    let dir = TempDir::new().unwrap();
    let file = module_file(&dir, "m.json", "Q", &[&["1/z"]]);
    let out = realpv(&["flat", file.to_str().unwrap()]);
    let json = stdout_json(&out);
    assert_eq!(json["basis"], serde_json::json!([["z"]]));
    assert_eq!(json["complete"], Value::Bool(true));

    // half-integer residue: no rational solution, still a complete answer
    let file = module_file(&dir, "half.json", "Q", &[&["1/(2*z)"]]);
    let json = stdout_json(&realpv(&["flat", file.to_str().unwrap()]));
    assert_eq!(json["basis"], serde_json::json!([]));
    assert_eq!(json["complete"], Value::Bool(true));
}

#[test]
fn malformed_expressions_are_input_errors() {
    let dir = TempDir::new().unwrap();
    let file = module_file(&dir, "bad.json", "Q", &[&["1//z"]]);
    let out = realpv(&["flat", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr_text(&out).contains("1//z"));

    let ragged = dir.path().join("ragged.json");
    fs::write(&ragged, r#"{"field":"Q","matrix":[["1/z"],["0","0"]]}"#).unwrap();
    let out = realpv(&["flat", ragged.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr_text(&out).contains("square"));

    let out = realpv(&["flat", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unsupported_poles_ask_for_bounds_and_accept_them() {
    let dir = TempDir::new().unwrap();
    let file = module_file(&dir, "hard.json", "Q", &[&["1/z^2"]]);
    let out = realpv(&["flat", file.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr_text(&out);
    assert!(err.contains("unsupported"), "{err}");
    assert!(err.contains("z = 0"), "message names the pole: {err}");

    let out = realpv(&[
        "flat",
        file.to_str().unwrap(),
        "--denominator",
        "z",
        "--numerator-degree",
        "2",
    ]);
    let json = stdout_json(&out);
    assert_eq!(json["basis"], serde_json::json!([]));
    assert_eq!(json["complete"], Value::Bool(false));

    // the flags come as a pair
    let out = realpv(&["flat", file.to_str().unwrap(), "--denominator", "z"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn generate_then_classify_reproduces_the_form() {
    let dir = TempDir::new().unwrap();
    for (form, sig, label) in
        [("1,1,1", [3, 0], "SO(3,0)"), ("1,1,-1", [2, 1], "SO(2,1)")]
    {
        let gen = realpv(&["generate", "--group", "SO", "--form", form]);
        assert_eq!(code(&gen), 0);
        let path = dir.path().join("gen.json");
        fs::write(&path, &gen.stdout).unwrap();
        let json = stdout_json(&realpv(&["classify", path.to_str().unwrap()]));
        assert_eq!(json["flat_dim"], serde_json::json!(1));
        assert_eq!(json["signature"], serde_json::json!(sig));
        assert_eq!(json["label"], serde_json::json!(label));
    }
}

#[test]
fn generate_is_deterministic_for_a_fixed_seed() {
    let a = realpv(&["generate", "--group", "SO", "--form", "1,1,-1", "--seed", "3"]);
    let b = realpv(&["generate", "--group", "SO", "--form", "1,1,-1", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    // and the emitted file is already in canonical form: parsing and
    // re-serializing it is the identity
    let parsed: Value = serde_json::from_slice(&a.stdout).unwrap();
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("roundtrip.json");
    fs::write(&path, parsed.to_string()).unwrap();
    let again = stdout_json(&realpv(&["classify", path.to_str().unwrap()]));
    assert_eq!(again["flat_dim"], serde_json::json!(1));
}

#[test]
fn degenerate_classify_inputs_are_semantic_errors() {
    let dir = TempDir::new().unwrap();
    let zero = module_file(&dir, "zero.json", "Q", &[
        &["0", "0", "0"],
        &["0", "0", "0"],
        &["0", "0", "0"],
    ]);
    let out = realpv(&["classify", zero.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("invariant form not unique"));

    let gen = realpv(&["generate", "--group", "SL", "--n", "2"]);
    let path = dir.path().join("sl2.json");
    fs::write(&path, &gen.stdout).unwrap();
    let out = realpv(&["classify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("no invariant form"));
}

#[test]
fn rank1_reports_candidates_and_orderings() {
    let plus = stdout_json(&realpv(&["rank1", "1/(2*z)", "--ordering", "at:0:+"]));
    assert_eq!(plus["m"], serde_json::json!(2));
    assert_eq!(plus["u"], serde_json::json!("z"));
    let verdicts: Vec<(String, bool)> = plus["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["radicand"].as_str().unwrap().into(), c["compatible"].as_bool().unwrap()))
        .collect();
    assert_eq!(verdicts, vec![("z".into(), true), ("-z".into(), false)]);

    let minus = stdout_json(&realpv(&["rank1", "1/(2*z)", "--ordering", "at:0:-"]));
    let verdicts: Vec<bool> = minus["candidates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["compatible"].as_bool().unwrap())
        .collect();
    assert_eq!(verdicts, vec![false, true]);

    let trivial = stdout_json(&realpv(&["rank1", "3/(z-1)"]));
    assert_eq!(trivial["m"], serde_json::json!(1));
    assert!(trivial["pv_description"].as_str().unwrap().contains("trivial extension"));

    let out = realpv(&["rank1", "1/z^2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("higher-order pole"));

    let out = realpv(&["rank1", "1/(2*z)", "--ordering", "sideways"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn cocycle_validate_twist_and_lift() {
    let dir = TempDir::new().unwrap();
    let coc = so3_cocycle_file(&dir, "coc.json", &["1", "-1", "-1"]);
    let json = stdout_json(&realpv(&["cocycle", "validate", coc.to_str().unwrap()]));
    assert_eq!(json["valid"], Value::Bool(true));
    assert_eq!(json["group"], serde_json::json!("SO(3)"));

    let json = stdout_json(&realpv(&["cocycle", "twist-form", coc.to_str().unwrap()]));
    assert_eq!(json["twisted_signature"], serde_json::json!([1, 2]));
    assert_eq!(json["trivial"], Value::Bool(false));

    let json = stdout_json(&realpv(&["cocycle", "trivial", coc.to_str().unwrap()]));
    assert_eq!(json["trivial"], Value::Bool(false));
    assert!(json["gl_certificate"]["h"].is_array());

    let lift = so3_cocycle_file(&dir, "lift.json", &["i", "-i", "-i"]);
    let out = realpv(&["cocycle", "lift", lift.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr_text(&out).contains("extend constants"));

    let neg = so3_cocycle_file(&dir, "neg.json", &["-1", "1", "1"]);
    let json = stdout_json(&realpv(&["cocycle", "lift", neg.to_str().unwrap()]));
    assert_eq!(
        json["matrix"],
        serde_json::json!([["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]])
    );

    let skew = dir.path().join("notacocycle.json");
    fs::write(
        &skew,
        serde_json::json!({
            "group": { "type": "SO", "form": [["1","0","0"],["0","1","0"],["0","0","1"]] },
            "matrix": [["0","1","0"],["1","0","0"],["0","0","1"]],
        })
        .to_string(),
    )
    .unwrap();
    let out = realpv(&["cocycle", "validate", skew.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let nonconstant = dir.path().join("nonconstant.json");
    fs::write(
        &nonconstant,
        serde_json::json!({
            "group": { "type": "GL", "n": 1 },
            "matrix": [["z"]],
        })
        .to_string(),
    )
    .unwrap();
    let out = realpv(&["cocycle", "validate", nonconstant.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr_text(&out).contains("constants"));
}

#[test]
fn generate_flags_are_checked() {
    let out = realpv(&["generate", "--group", "SO"]);
    assert_eq!(code(&out), 1);
    let out = realpv(&["generate", "--group", "SL"]);
    assert_eq!(code(&out), 1);
    let out = realpv(&["generate", "--group", "E8"]);
    assert_eq!(code(&out), 1);
    let out = realpv(&["generate", "--group", "Sp", "--n", "3"]);
    assert_eq!(code(&out), 1);
    let out = realpv(&["generate", "--group", "SO", "--form", "1,1", "--coeffs", "1/z,2/z"]);
    assert_eq!(code(&out), 1);
    assert!(stderr_text(&out).contains("coefficient count"));

    let out = realpv(&["generate", "--group", "SO", "--form", "1,1", "--coeffs", "1/z"]);
    let json = stdout_json(&out);
    assert_eq!(json["field"], serde_json::json!("Q"));
    assert_eq!(json["matrix"], serde_json::json!([["0", "-1/z"], ["1/z", "0"]]));

    let json = stdout_json(&realpv(&["generate", "--group", "SU2"]));
    assert_eq!(json["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_exit_codes() {
    let out = realpv(&["--help"]);
    assert_eq!(code(&out), 0);
    let out = realpv(&["--version"]);
    assert_eq!(code(&out), 0);
    let out = realpv(&[]);
    assert_eq!(code(&out), 1);
    let out = realpv(&["flatten"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn text_mode_is_available_everywhere() {
    let dir = TempDir::new().unwrap();
    let file = module_file(&dir, "m.json", "Q", &[&["1/z"]]);
    let out = realpv(&["flat", file.to_str().unwrap(), "--text"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    assert!(text.contains("complete basis"), "{text}");
    assert!(text.contains("(z)"), "{text}");

    let out = realpv(&["rank1", "1/(2*z)", "--text"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("t^2 = z"));
}

#[test]
fn modules_over_the_gaussian_constants_are_accepted() {
    let dir = TempDir::new().unwrap();
    let file = module_file(&dir, "qi.json", "Qi", &[&["i/z", "0"], &["0", "-i/z"]]);
    let json = stdout_json(&realpv(&["flat", file.to_str().unwrap()]));
    assert_eq!(json["basis"], serde_json::json!([]));
    assert_eq!(json["complete"], Value::Bool(true));

    // i is rejected over Q
    let file = module_file(&dir, "q.json", "Q", &[&["i/z"]]);
    let out = realpv(&["flat", file.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
}
