use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn commrep(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commrep"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn witness_certify_verify_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let w = commrep(&["witness", "--n", "1", "--lambda", "2", "--field", "Q"], d);
    assert_eq!(w.status.code(), Some(0));
    let doc = stdout_json(&w);
    let one = json!(["1", "1"]);
    let zero = json!(["0", "1"]);
    assert_eq!(doc["matrices"][0]["entries"], json!([one, one, zero, one]));
    assert_eq!(doc["matrices"][1]["entries"], json!([one, zero, zero, ["-1", "1"]]));
    assert_eq!(doc["labels"], json!(["a_1", "b_1"]));
    std::fs::write(d.join("w1.json"), &w.stdout).unwrap();

    let c = commrep(&["certify", "--input", "w1.json"], d);
    assert_eq!(c.status.code(), Some(0));
    let cert = stdout_json(&c);
    assert_eq!(cert["bound"], json!(2));
    assert_eq!(cert["v"], json!([["0", "1"], ["1", "1"]]));
    std::fs::write(d.join("c1.json"), &c.stdout).unwrap();

    let v = commrep(&["verify-cert", "--cert", "c1.json", "--input", "w1.json"], d);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout_json(&v), json!({"valid": true, "reasons": []}));

    // A corrupted bound is a negative verdict, not a crash.
    let mut bad = cert.clone();
    bad["bound"] = json!(3);
    write(d, "bad.json", &bad.to_string());
    let v = commrep(&["verify-cert", "--cert", "bad.json", "--input", "w1.json"], d);
    assert_eq!(v.status.code(), Some(2));
    assert_eq!(stdout_json(&v)["reasons"][0]["code"], json!("bound_mismatch"));
}

#[test]
fn emitted_documents_reserialize_byte_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let w = commrep(&["witness", "--n", "3", "--lambda", "-2/3", "--field", "Q"], d);
    std::fs::write(d.join("w.json"), &w.stdout).unwrap();
    let c = commrep(&["certify", "--input", "w.json"], d);
    std::fs::write(d.join("c.json"), &c.stdout).unwrap();
    // Feeding a compacted copy back must reproduce the canonical form.
    let compact: Value = serde_json::from_slice(&w.stdout).unwrap();
    write(d, "wc.json", &compact.to_string());
    let c2 = commrep(&["certify", "--input", "wc.json"], d);
    assert_eq!(c.stdout, c2.stdout);
    let g = r#"{"vertices":6,"edges":[[1,4],[2,5],[3,6]]}"#;
    write(d, "g.json", g);
    let r = commrep(&["verify-graph", "--graph", "g.json", "--assignment", "w.json"], d);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout_json(&r), json!({"realizes": true, "violations": []}));
}

#[test]
fn pattern_violation_and_small_field_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let m = r#"{"field":"Q","rows":2,"cols":2,"entries":[["1","1"],["1","1"],["0","1"],["1","1"]]}"#;
    write(d, "same.json", &format!(r#"{{"graph_dim":2,"matrices":[{m},{m}]}}"#));
    let out = commrep(&["certify", "--input", "same.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], json!("pattern_violation"));
    assert!(!out.stderr.is_empty());

    let w = commrep(&["witness", "--n", "2", "--lambda", "1", "--field", "Fp:3"], d);
    std::fs::write(d.join("w3.json"), &w.stdout).unwrap();
    let out = commrep(&["certify", "--input", "w3.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], json!("field_too_small"));

    write(d, "g.json", r#"{"vertices":2,"edges":[]}"#);
    let out = commrep(&["verify-graph", "--graph", "g.json", "--assignment", "same.json"], d);
    assert_eq!(out.status.code(), Some(0));
    write(d, "g.json", r#"{"vertices":2,"edges":[[1,2]]}"#);
    let out = commrep(&["verify-graph", "--graph", "g.json", "--assignment", "same.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["violations"][0]["observed"], json!("commute"));
}

#[test]
fn malformed_input_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "bad.json", r#"{"graph_dim":1,"matrices":[{"field":"Q","rows":1,"cols":1,"entries":[["1","x"]]}]}"#);
    let out = commrep(&["certify", "--input", "bad.json"], d);
    assert_eq!(out.status.code(), Some(1));
    let detail = stdout_json(&out)["detail"].as_str().unwrap().to_string();
    assert!(detail.contains(".matrices[0].entries[0]"), "{detail}");

    write(d, "bad.json", r#"{"vertices":2,"edges":[[1,"2"]]}"#);
    let out = commrep(&["search", "--graph", "bad.json", "--field", "Fp:2", "--rmax", "2"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edges[0][1]"));

    let out = commrep(&["certify", "--input", "missing.json"], d);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(commrep(&["frobnicate"], d).status.code(), Some(1));
    assert_eq!(commrep(&["witness", "--n", "1", "--lambda", "2", "--field", "Fp:6"], d).status.code(), Some(1));
    assert_eq!(commrep(&["witness", "--n", "1", "--lambda", "0", "--field", "Q"], d).status.code(), Some(1));
    assert_eq!(commrep(&["--help"], d).status.code(), Some(0));
}

#[test]
fn search_split_and_count_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(d, "g.json", r#"{"vertices":2,"edges":[[1,2]]}"#);
    let out = commrep(&["search", "--graph", "g.json", "--field", "Fp:2", "--rmax", "3"], d);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!((report["status"].clone(), report["lower"].clone(), report["upper"].clone()), (json!("exact"), json!(2), json!(2)));
    assert_eq!(report["witness_source"], json!("search"));

    write(d, "m2.json", r#"{"vertices":4,"edges":[[1,3],[2,4]]}"#);
    let out = commrep(&["search", "--graph", "m2.json", "--field", "Fp:2", "--rmax", "3", "--budget", "20"], d);
    assert_eq!(out.status.code(), Some(3));
    let report = stdout_json(&out);
    assert_eq!(report["status"], json!("exhausted_budget"));
    assert_eq!(report["exclusions"][1], json!({"r": 2, "method": "theorem2"}));

    let gen = |e: &str| format!(r#"{{"field":"Fp:2","rows":2,"cols":2,"entries":{e}}}"#);
    write(
        d,
        "m.json",
        &format!(r#"{{"field":"Fp:2","dim":2,"generators":[{}]}}"#, gen(r#"["1","1","0","1"]"#)),
    );
    let out = commrep(&["split", "--module", "m.json"], d);
    assert_eq!(out.status.code(), Some(0));
    let rep = stdout_json(&out);
    assert_eq!(rep["factor_dims"], json!([1, 1]));
    assert_eq!(rep["base_field_only"], json!(true));

    let id7 = format!(
        r#"{{"field":"Fp:2","rows":7,"cols":7,"entries":[{}]}}"#,
        (0..49).map(|k| if k % 8 == 0 { r#""1""# } else { r#""0""# }).collect::<Vec<_>>().join(",")
    );
    write(d, "big.json", &format!(r#"{{"field":"Fp:2","dim":7,"generators":[{id7}]}}"#));
    let out = commrep(&["split", "--module", "big.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"], json!("guard_violation"));

    write(d, "dims.json", "[[2,2]]");
    let out = commrep(&["count-check", "--dims", "dims.json"], d);
    assert_eq!(out.status.code(), Some(0));
    let c = stdout_json(&out);
    assert_eq!(c["verdict"], json!("satisfied"));
    assert_eq!(
        [&c["sum_of_products"], &c["sum_of_powers"], &c["sum_of_doubled_sizes"], &c["two_n"]],
        [&json!("4"); 4]
    );
    write(d, "dims.json", "[[1,2]]");
    let out = commrep(&["count-check", "--dims", "dims.json"], d);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["uncovered"], json!([1]));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = commrep(&["selftest"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], json!(true));
}
