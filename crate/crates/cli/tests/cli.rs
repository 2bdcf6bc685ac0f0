use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn lac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn record(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert_eq!(text.lines().count(), 1, "one JSON line: {text}");
    serde_json::from_str(&text).unwrap()
}

fn family_file(lines: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(lines.as_bytes()).unwrap();
    f
}

#[test]
fn formula_values() {
    let out = lac(&["formula", "--n", "6", "--k", "3"]);
    assert!(out.status.success());
    let r = record(&out);
    assert_eq!(r["command"], "formula");
    assert_eq!(r["result"]["value"], "43");
    assert_eq!(r["result"]["sums"], serde_json::json!(["22", "21", "21"]));
    assert_eq!(
        record(&lac(&["formula", "--n", "3", "--k", "3"]))["result"]["value"],
        "6"
    );
    let r = record(&lac(&["formula", "--n", "4", "--k", "2"]));
    assert_eq!(r["result"]["value"], "8");
    assert!(r["result"]["note"].as_str().unwrap().contains("k >= 3"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        lac(&["formula", "--n", "3", "--k", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(
        lac(&["formula", "--n", "300", "--k", "4"]).status.code(),
        Some(2)
    );
    assert_eq!(lac(&["formula", "--n", "3"]).status.code(), Some(2));
    assert_eq!(
        lac(&["construct", "--n", "5", "--k", "2"]).status.code(),
        Some(2)
    );
}

#[test]
fn construct_and_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    let out = lac(&[
        "construct",
        "--n",
        "6",
        "--k",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r = record(&out);
    assert_eq!(r["result"]["size"], 43);
    assert_eq!(r["result"]["formula_value"], "43");
    assert_eq!(r["result"]["admissible"], true);
    let out = lac(&[
        "verify-family",
        path.to_str().unwrap(),
        "--k",
        "3",
        "--n",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(record(&out)["result"]["size"], 43);
    assert_eq!(
        lac(&["construct", "--n", "21", "--k", "3"]).status.code(),
        Some(3)
    );
}

#[test]
fn verify_family_verdicts() {
    let bad = family_file("-\n2\n2,3\n2,4\n");
    let out = lac(&["verify-family", bad.path().to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let r = record(&out);
    assert_eq!(r["result"]["admissible"], false);
    assert_eq!(
        r["result"]["y_copy"]["chain"],
        serde_json::json!(["-", "2"])
    );
    assert_eq!(
        r["result"]["y_copy"]["pair"],
        serde_json::json!(["2,3", "2,4"])
    );

    let parse = family_file("1\n# comment\n1,0\n");
    let out = lac(&["verify-family", parse.path().to_str().unwrap(), "--k", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        lac(&["verify-family", "/nonexistent/family", "--k", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn search_is_deterministic_across_workers() {
    let one = record(&lac(&["search", "--n", "4", "--k", "4", "--workers", "1"]));
    let four = record(&lac(&["search", "--n", "4", "--k", "4", "--workers", "4"]));
    assert_eq!(one["result"], four["result"]);
    assert_eq!(one["result"]["optimum"], "14");
    assert_eq!(one["result"]["matches_closed_form"], true);
    assert_eq!(four["worker_count"], 4);
    let r = record(&lac(&["search", "--n", "3", "--k", "2"]));
    assert_eq!(r["result"]["optimum"], "4");
}

#[test]
fn search_flags() {
    let r = record(&lac(&[
        "search",
        "--n",
        "4",
        "--k",
        "3",
        "--prune-bound",
        "11",
    ]));
    assert_eq!(r["parameters"]["prune_bound"], "11");
    assert_eq!(r["result"]["stopped_at_prune_bound"], true);
    let r = record(&lac(&[
        "search", "--n", "4", "--k", "3", "--mode", "interval",
    ]));
    assert_eq!(r["result"]["mode"], "interval");
    assert!(
        r["result"]["optimum"]
            .as_str()
            .unwrap()
            .parse::<u32>()
            .unwrap()
            <= 47
    );
    assert_eq!(
        lac(&["search", "--n", "6", "--k", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(
        lac(&["search", "--n", "5", "--k", "3", "--max-elements", "16"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn verifiers() {
    for which in ["lemma1", "lemma2", "theorem9"] {
        let out = lac(&["verify", "--n", "4", "--k", "3", "--which", which]);
        assert!(out.status.success(), "{which}");
        let r = record(&out);
        assert_eq!(r["result"]["lemma"], which);
        assert_eq!(r["result"]["violations"], 0);
        assert_eq!(r["result"]["families_enumerated"], 7440);
    }
    let r = record(&lac(&[
        "verify", "--n", "4", "--k", "4", "--which", "lemma2",
    ]));
    assert_eq!(r["result"]["status"], "vacuous");
    let r = record(&lac(&[
        "verify",
        "--n",
        "6",
        "--k",
        "3",
        "--which",
        "certificate",
    ]));
    assert_eq!(r["result"]["bound"], "258");
    assert_eq!(
        r["result"]["w"],
        serde_json::json!(["1", "5", "9", "5", "1"])
    );
    let out = lac(&["verify", "--n", "12", "--k", "5", "--which", "identities"]);
    assert!(out.status.success());
    let out = lac(&[
        "verify",
        "--n",
        "5",
        "--k",
        "3",
        "--which",
        "doublecount",
        "--samples",
        "4",
    ]);
    assert!(out.status.success());
    assert_eq!(
        record(&out)["result"]["counts"].as_array().unwrap().len(),
        4
    );
    assert_eq!(
        lac(&["verify", "--n", "6", "--k", "3", "--which", "lemma1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        lac(&["verify", "--n", "9", "--k", "3", "--which", "doublecount"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn csv_carries_the_same_content() {
    let json = record(&lac(&["formula", "--n", "5", "--k", "3"]));
    let out = lac(&["--format", "csv", "formula", "--n", "5", "--k", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let map: std::collections::BTreeMap<String, String> = rows
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].to_string(), r[1].to_string())
        })
        .collect();
    assert_eq!(
        map["result.value"],
        json["result"]["value"].as_str().unwrap()
    );
    assert_eq!(
        map["result.sums.1"],
        json["result"]["sums"][1].as_str().unwrap()
    );
    assert_eq!(map["command"], "formula");
}

#[test]
fn payload_is_byte_identical_across_runs() {
    let strip = |out: Output| {
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("timing");
        v.to_string()
    };
    let args = ["verify", "--n", "4", "--k", "4", "--which", "theorem9"];
    assert_eq!(strip(lac(&args)), strip(lac(&args)));
}
