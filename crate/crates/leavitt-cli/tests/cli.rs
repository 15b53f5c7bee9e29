//! Process-level checks of the exit-code contract and output formats over
//! the fixture corpus.

use std::process::Command;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_leavitt")).args(args).output().unwrap();
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn classify_isomorphic_pair_exits_zero_with_witness_table() {
    let (code, stdout, _) =
        run(&["classify", &fixture("F1.graph"), &fixture("F2.graph"), "--witness"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.lines().next(), Some("ISO"));
    assert!(stdout.contains("base vertices: v3 -> w2"));
    assert!(stdout.contains("residue shift c: 1"));
    assert!(stdout.contains("global shift +1"));
    assert!(stdout.contains("unit shift at 2 by -2"));
    assert!(stdout.contains("permute (2,1,3,4)"));
}

#[test]
fn classify_separated_pair_exits_one_with_invariants() {
    let (code, stdout, _) = run(&["classify", &fixture("G1.graph"), &fixture("G2.graph")]);
    assert_eq!(code, 1);
    assert_eq!(stdout.lines().next(), Some("NON-ISO"));
    assert!(stdout.contains("[2,2]"));
    assert!(stdout.contains("[1,3]"));
}

#[test]
fn classify_out_of_scope_needs_the_cardinality_flag() {
    let (code, _, stderr) = run(&["classify", &fixture("F.graph"), &fixture("Fprime.graph")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out-degree"), "{stderr}");

    let (code, stdout, _) =
        run(&["classify", &fixture("F.graph"), &fixture("Fprime.graph"), "--cardinality"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("22 vs 19"));
    assert!(stdout.contains("NON-ISO"));

    let (code, stdout, _) =
        run(&["classify", &fixture("F.graph"), &fixture("F.graph"), "--cardinality"]);
    assert_eq!(code, 2);
    assert!(stdout.contains("INCONCLUSIVE"));
}

#[test]
fn elements_lists_the_windowed_and_complete_enumerations() {
    let (code, stdout, _) = run(&["elements", &fixture("F.graph")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("count: 22"));
    assert!(!stdout.contains("window:"), "acyclic enumeration is complete");
    assert!(stdout.lines().any(|l| l == "e1 e3 e3* e1*"));

    let (code, stdout, _) = run(&["elements", &fixture("L1.graph"), "--window", "2"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("window: 2"));
    assert!(stdout.contains("count: 5"));
}

#[test]
fn mul_renders_products_and_rejects_bad_expressions() {
    let (code, stdout, _) = run(&["mul", &fixture("F.graph"), "e1", "e2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "e1 e2");

    // Zero products are fine; they render as 0.
    let (code, stdout, _) = run(&["mul", &fixture("F.graph"), "e2", "e3"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.trim(), "0");

    // A dead expression is an input error, reported with its position.
    let (code, _, stderr) = run(&["mul", &fixture("F.graph"), "e1 e3 e2", "v4"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("factor 3"), "{stderr}");

    let (code, _, stderr) = run(&["mul", &fixture("F.graph"), "nope", "v1"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("nope"));
}

#[test]
fn invariant_prints_the_descriptor() {
    let (code, stdout, _) = run(&["invariant", &fixture("F1.graph")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("M4(K[x^2,x^-2])(0,1,1,2)"));

    let (code, _, stderr) = run(&["invariant", &fixture("F.graph")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("out-degree"));
}

#[test]
fn validate_reports_structure_and_rejects_bad_files() {
    let (code, stdout, _) = run(&["validate", &fixture("F.graph")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("vertices: 4"));
    assert!(stdout.contains("sinks: v3 v4"));
    assert!(stdout.contains("classifier scope: no"));

    let (code, stdout, _) = run(&["validate", &fixture("F1.json")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("cycle: e2 e3 (length 2)"));

    let (code, _, stderr) = run(&["validate", &fixture("bad_dangling.graph")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("undeclared vertex"), "{stderr}");

    let (code, _, _) = run(&["validate", "/nonexistent.graph"]);
    assert_eq!(code, 2);
}

#[test]
fn algebra_dim_prints_blocks_and_refuses_cycles() {
    let (code, stdout, _) = run(&["algebra-dim", &fixture("F.graph")]);
    assert_eq!(code, 0);
    assert!(stdout.contains("dimension: 18"));
    assert!(stdout.contains("M3(K) at v3 + M3(K) at v4"));
    assert!(stdout.contains("ideal generators:"));

    let (code, stdout, _) = run(&["--json", "algebra-dim", &fixture("E1.graph")]);
    assert_eq!(code, 0);
    let parsed: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(parsed["dimension"], 9);
    assert!(parsed["generators"].as_array().unwrap().is_empty());

    let (code, _, stderr) = run(&["algebra-dim", &fixture("L1.graph")]);
    assert_eq!(code, 2);
    assert!(stderr.contains("infinite"));

    let (code, _, stderr) = run(&["algebra-dim", &fixture("F.graph"), "--max-size", "10"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("10"), "{stderr}");
}

#[test]
fn classify_json_certificates_verify_in_a_fresh_process() {
    let dir = tempfile::tempdir().unwrap();

    for (a, b, classify_code) in [
        ("F1.graph", "F2.graph", 0),
        ("G1.graph", "G2.graph", 1),
        ("E1.graph", "E1.graph", 0),
        ("L1.graph", "E2.graph", 1),
    ] {
        let (code, stdout, _) = run(&["--json", "classify", &fixture(a), &fixture(b)]);
        assert_eq!(code, classify_code, "{a} vs {b}");
        let cert_path = dir.path().join("cert.json");
        std::fs::write(&cert_path, &stdout).unwrap();
        let (code, stdout, _) =
            run(&["verify", cert_path.to_str().unwrap(), &fixture(a), &fixture(b)]);
        assert_eq!(code, 0, "{a} vs {b}");
        assert!(stdout.contains("VERIFIED (window 6)"));
    }
}

#[test]
fn verify_rejects_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let (_, stdout, _) =
        run(&["--json", "classify", &fixture("F1.graph"), &fixture("F2.graph")]);

    // Shift the residue offset: structurally valid JSON, wrong mathematics.
    let tampered = stdout.replace("\"c\": 1", "\"c\": 3");
    assert_ne!(tampered, stdout);
    let cert_path = dir.path().join("tampered.json");
    std::fs::write(&cert_path, &tampered).unwrap();
    let (code, stdout, _) = run(&[
        "verify",
        cert_path.to_str().unwrap(),
        &fixture("F1.graph"),
        &fixture("F2.graph"),
        "--window",
        "4",
    ]);
    assert_eq!(code, 2);
    assert!(stdout.contains("REJECTED (window 4)"));

    // A certificate for a different pair of graphs must not transfer.
    let cert_path = dir.path().join("cert.json");
    let (_, original, _) =
        run(&["--json", "classify", &fixture("F1.graph"), &fixture("F2.graph")]);
    std::fs::write(&cert_path, &original).unwrap();
    let (code, _, _) = run(&[
        "verify",
        cert_path.to_str().unwrap(),
        &fixture("G1.graph"),
        &fixture("G2.graph"),
    ]);
    assert_eq!(code, 2);
}

#[test]
fn json_flag_switches_every_report() {
    let f = fixture("F.graph");
    let e1 = fixture("E1.graph");
    let cases: Vec<Vec<&str>> = vec![
        vec!["--json", "validate", &f],
        vec!["--json", "elements", &e1],
        vec!["--json", "mul", &f, "e1", "e2"],
        vec!["--json", "invariant", &e1],
        vec!["--json", "classify", &e1, &e1],
        vec!["--json", "algebra-dim", &f],
    ];
    for args in cases {
        let (code, stdout, stderr) = run(&args);
        assert_eq!(code, 0, "{args:?}: {stderr}");
        serde_json::from_str::<serde_json::Value>(&stdout)
            .unwrap_or_else(|e| panic!("{args:?}: {e}\n{stdout}"));
    }
}
