use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qweyl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qweyl")).args(args).output().unwrap()
}

fn body(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn scratch(name: &str, contents: &[u8]) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn construct_intro() -> Output {
    qweyl(&["construct", "singular", "--l", "2", "--ctx", "prime:3", "--beta", "0"])
}

#[test]
fn intro_pair() {
    let out = construct_intro();
    assert_eq!(out.status.code(), Some(0));
    let v = body(&out);
    assert_eq!(v["x"]["entries"], serde_json::json!([0, 1, 0, 0]));
    assert_eq!(v["y"]["entries"], serde_json::json!([0, 0, 1, 0]));
    assert_eq!(v["ctx"]["gamma"], 2);
}

#[test]
fn verify_round_trip_and_failure() {
    let good = construct_intro().stdout;
    let path = scratch("intro.json", &good);
    let out = qweyl(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(body(&out)["holds"], true);

    let mut v: Value = serde_json::from_slice(&good).unwrap();
    v["y"]["entries"] = serde_json::json!([0, 0, 2, 0]);
    let bad = scratch("bad.json", v.to_string().as_bytes());
    let out = qweyl(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let v = body(&out);
    assert_eq!(v["holds"], false);
    // YX − γXY − I with Y = 2e_21: 2e_22 − 2·2e_11 − I ≡ diag(1, 1) mod 3
    assert_eq!(v["residual"]["entries"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn reduce_output_round_trips_byte_for_byte() {
    let sol = qweyl(&["construct", "nonsingular", "--l", "3", "--lambda", "4", "--bs", "2;3;5"]);
    assert_eq!(sol.status.code(), Some(0));
    let path = scratch("ns.json", &sol.stdout);
    let again = qweyl(&["verify", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));

    let out_path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ns_copy.json");
    let copy = qweyl(&["-o", out_path.to_str().unwrap(), "construct", "nonsingular", "--l", "3", "--lambda", "4", "--bs", "2;3;5"]);
    assert_eq!(copy.status.code(), Some(0));
    assert_eq!(std::fs::read(&out_path).unwrap(), sol.stdout);

    let red = qweyl(&["reduce", path.to_str().unwrap()]);
    assert_eq!(red.status.code(), Some(0));
    let v = body(&red);
    assert_eq!(v["canonical"]["tag"], "NonsingularLambdaEta");
    assert_eq!(v["canonical"]["eta"], serde_json::json!(["30/1", "0/1"]));
}

#[test]
fn equivalence_of_constructions() {
    let a = qweyl(&["construct", "nonsingular", "--l", "3", "--lambda", "4", "--bs", "2;3;5"]);
    let b = qweyl(&["construct", "nonsingular", "--l", "3", "--lambda", "4", "--eta", "30"]);
    let c = qweyl(&["construct", "nonsingular", "--l", "3", "--lambda", "4", "--eta", "7"]);
    let (a, b, c) = (scratch("eq_a.json", &a.stdout), scratch("eq_b.json", &b.stdout), scratch("eq_c.json", &c.stdout));
    let yes = qweyl(&["equivalent", a.to_str().unwrap(), b.to_str().unwrap()]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(body(&yes)["equivalent"], true);
    assert!(body(&yes)["witness"].is_object());
    let no = qweyl(&["equivalent", a.to_str().unwrap(), c.to_str().unwrap()]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(body(&no)["equivalent"], false);
}

#[test]
fn usage_errors_exit_2_and_name_the_field() {
    let out = qweyl(&["construct", "singular", "--l", "2", "--ctx", "prime:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(body(&out)["error"]["kind"], "field");

    let out = qweyl(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(body(&out)["error"]["kind"], "usage");

    let bad = scratch("malformed.json", br#"{"ctx":{"kind":"prime","p":3,"l":2},"x":5}"#);
    let out = qweyl(&["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = body(&out);
    assert_eq!(v["error"]["kind"], "format");
    assert_eq!(v["error"]["field"], "x.rows");
}

#[test]
fn irreducible_and_elementary() {
    let path = scratch("irr.json", &construct_intro().stdout);
    let out = qweyl(&["irreducible", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(body(&out)["algebra_dim"], 4);

    let out = qweyl(&["elementary", "3", "1", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(body(&out)["m"], 1);
    let out = qweyl(&["elementary", "3", "4", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn census_reports_unsplit_classes() {
    let out = qweyl(&["census", "--p", "3", "--l", "2", "--n", "2"]);
    // the bijection fails over F_3, so the census reports failure
    assert_eq!(out.status.code(), Some(1));
    let v = body(&out);
    assert_eq!(v["total_solutions"], 264);
    assert_eq!(v["irreducible_count"], 168);
    assert_eq!(v["class_count"], 7);
    assert_eq!(v["cross_validation"]["predicted_count"], 5);
    assert_eq!(v["cross_validation"]["unexpected"].as_array().unwrap().len(), 2);

    let out = qweyl(&["census", "--p", "7", "--l", "3", "--n", "3", "--budget", "1000"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(body(&out)["error"]["kind"], "census");
}

#[test]
fn selftest_is_deterministic() {
    let a = qweyl(&["selftest", "--seed", "7"]);
    let b = qweyl(&["selftest", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    // the flagship census fails over a prime field
    assert_eq!(a.status.code(), Some(1));
    let v = body(&a);
    assert_eq!(v["seed"], 7);
    let failed: Vec<_> = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_u64().unwrap())
        .collect();
    assert_eq!(failed, vec![9]);
}
