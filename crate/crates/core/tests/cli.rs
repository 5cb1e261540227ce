//! End-to-end checks of the command line front end: output shapes, JSON
//! stability and exit codes.

use std::process::{Command, Output};

fn bootcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bootcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn kk_unit_law() {
    let out = bootcat(&["kk", "unit", "Z/6 [0]"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("deg 0: Z/6"), "{text}");
    assert!(text.contains("deg 1: 0"), "{text}");
}

#[test]
fn kk_residue_self_pair() {
    let out = bootcat(&["--json", "kk", "kappa(2)", "kappa(2)"]);
    let v = json(&out);
    assert_eq!(v["result"]["deg0"], "Z/2");
    assert_eq!(v["result"]["deg1"], "Z/2");
    assert_eq!(v["unrepresentable"].as_array().unwrap().len(), 0);
}

#[test]
fn kk_strict_mode_flags_unrepresentable() {
    let out = bootcat(&["kk", "iota(2)", "unit"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("unrepresentable"));

    let out = bootcat(&["--strict", "kk", "iota(2)", "unit"]);
    assert_eq!(out.status.code(), Some(3));

    let v = json(&bootcat(&["--json", "kk", "iota(2)", "unit"]));
    assert_eq!(v["result"]["deg0"], "0");
    let tags = v["unrepresentable"].as_array().unwrap();
    assert!(!tags.is_empty());
}

#[test]
fn tensor_and_support() {
    let v = json(&bootcat(&["--json", "tensor", "moore(4)", "moore(6)"]));
    assert_eq!(v["result"]["deg0"], "Z/2");
    assert_eq!(v["result"]["deg1"], "Z/2");

    let v = json(&bootcat(&["--json", "support", "moore(12)"]));
    assert_eq!(v["result"]["set"], serde_json::json!([2, 3]));

    let v = json(&bootcat(&["--json", "suppz", "unit"]));
    assert_eq!(v["result"]["set"], "all");

    let v = json(&bootcat(&["--json", "support", "kappa(0)"]));
    assert_eq!(v["result"]["set"], serde_json::json!([0]));
}

#[test]
fn member_and_smashing() {
    let v = json(&bootcat(&["--json", "member", "moore(12)", "--set", "2,3"]));
    assert_eq!(v["result"]["bool"], true);
    let v = json(&bootcat(&["--json", "member", "moore(12)", "--set", "2"]));
    assert_eq!(v["result"]["bool"], false);

    let v = json(&bootcat(&["--json", "smashing", "--set", "0"]));
    assert_eq!(v["result"]["bool"], false);
    let v = json(&bootcat(&["--json", "smashing", "--set", "2,5"]));
    assert_eq!(v["result"]["bool"], true);
    let v = json(&bootcat(&["--json", "smashing", "--set", "all"]));
    assert_eq!(v["result"]["bool"], true);
}

#[test]
fn generates_with_membership() {
    let v = json(&bootcat(&["--json", "generates", "kappa(2)", "kappa(5)"]));
    assert_eq!(v["result"]["set"], serde_json::json!([2, 5]));

    let v = json(&bootcat(&[
        "--json",
        "generates",
        "kappa(2)",
        "--contains",
        "Z/4 [0]",
    ]));
    assert_eq!(v["result"]["bool"], true);
}

#[test]
fn cone_multiplication_shorthand() {
    let v = json(&bootcat(&["--json", "cone", "--mult", "6"]));
    assert_eq!(v["result"]["deg0"], "Z/6");
    assert_eq!(v["result"]["deg1"], "0");
    assert_eq!(v["properties"][0]["pass"], true);
}

#[test]
fn cone_with_matrices() {
    let v = json(&bootcat(&[
        "--json", "cone", "moore(4)", "moore(2)", "--f0", "1",
    ]));
    assert_eq!(v["result"]["deg0"], "0");
    assert_eq!(v["result"]["deg1"], "Z/2");

    // matrices that do not respect the relations are usage errors
    let out = bootcat(&["cone", "moore(2)", "moore(4)", "--f0", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_2() {
    for bad in ["Z/0", "Z/4 + klein", "I(4)", "Z ; Z ; Z"] {
        let out = bootcat(&["kk", bad, "unit"]);
        assert_eq!(out.status.code(), Some(2), "input {bad:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    }
    let out = bootcat(&["member", "unit", "--set", "2,4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bootcat(&["verify", "spectral"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_command() {
    let v = json(&bootcat(&["--json", "oracle", "hom", "Z/4", "Z/6"]));
    assert_eq!(v["result"]["bool"], true);
    assert_eq!(v["properties"][0]["witness"], "Z/2");

    let out = bootcat(&["oracle", "hom", "Z/128", "Z/2"]);
    assert_eq!(out.status.code(), Some(2)); // exceeds default bound

    let out = bootcat(&["oracle", "hom", "Z", "Z/2"]);
    assert_eq!(out.status.code(), Some(2)); // not finite
}

#[test]
fn verify_small_suite_and_determinism() {
    let args = [
        "--json",
        "--seed",
        "5",
        "--prime-bound",
        "5",
        "--max-order",
        "16",
        "verify",
        "smashing",
        "--corpus-size",
        "24",
    ];
    let first = bootcat(&args);
    assert!(first.status.success());
    let second = bootcat(&args);
    assert_eq!(stdout(&first), stdout(&second), "same seed, same bytes");

    let v = json(&first);
    assert_eq!(v["result"]["bool"], true);
    assert!(v["properties"].as_array().unwrap().len() >= 3);

    // JSON round-trips through the report type
    let report: bootcat::RunReport = serde_json::from_str(stdout(&first).trim()).unwrap();
    assert_eq!(
        serde_json::to_string(&report).unwrap(),
        stdout(&first).trim()
    );
}
