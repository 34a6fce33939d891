use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scroll-ulrich"))
}

fn path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn h(args: &[&str]) -> Vec<u64> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    assert_eq!(doc["schema"], "scroll-ulrich/1");
    assert_eq!(doc["agreement"], true);
    doc["h"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect()
}

#[test]
fn cohomology_examples() {
    assert_eq!(
        h(&["cohomology", "--variety", "1,2", "--sheaf", "O(1,0)"]),
        vec![9, 0, 0, 0]
    );
    assert_eq!(
        h(&["cohomology", "--variety", "1,1", "--sheaf", "O(-1,5)"]),
        vec![0, 0, 0, 0]
    );
    assert_eq!(
        h(&["cohomology", "--variety", "1,1", "--sheaf", "2*Om(0,2)"]),
        vec![6, 0, 0, 0]
    );
}

#[test]
fn bad_input_exits_nonzero() {
    let out = run(&["cohomology", "--variety", "1,1", "--sheaf", "O(1,"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("byte 4"));
    let out = run(&["cohomology", "--variety", "2,1", "--sheaf", "O(0,0)"]);
    assert!(!out.status.success());
    let out = run(&["resolution", "--variety", "1,2", "--sheaf", "O(0,1)"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("not Ulrich"));
    let out = run(&["cohomology", "--sheaf", "O(0,0)"]);
    assert!(!out.status.success());
}

#[test]
fn single_sheaf_commands() {
    let doc = json(&run(&["ulrich", "--variety", "2,2", "--sheaf", "Om(0,5)"]));
    assert_eq!(doc["is_ulrich"], true);
    assert_eq!(doc["h0"], 24);
    let doc = json(&run(&["dual", "--variety", "1,1", "--sheaf", "O(0,1)"]));
    assert_eq!(doc["dual"], "O(2,-2)");
    let doc = json(&run(&[
        "regularity",
        "--variety",
        "1,1",
        "--sheaf",
        "O(0,1)",
    ]));
    assert_eq!(doc["regular_0_0"], true);
    let doc = json(&run(&[
        "resolution",
        "--variety",
        "1,1",
        "--sheaf",
        "O(0,1)",
    ]));
    let m: Vec<u64> = doc["report"]["multiplicities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["value"].as_u64().unwrap())
        .collect();
    assert_eq!(m, vec![0, 0, 1, 0, 3, 3]);
    assert!(run(&[
        "resolution",
        "--low-c",
        "--variety",
        "1,1",
        "--sheaf",
        "O(2,-2)"
    ])
    .status
    .success());
    assert!(run(&["monad", "--variety", "2,2", "--sheaf", "Om(2,-1)"])
        .status
        .success());
    let out = run(&["monad", "--variety", "2,2", "--sheaf", "Om(0,5)"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("precondition"));
}

#[test]
fn markdown_table() {
    let out = run(&[
        "--format",
        "markdown",
        "beilinson",
        "--variety",
        "1,1",
        "--sheaf",
        "O(2,-2)",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| 2 | 0 | 0 | 2 | 0 | 0 | 0 |"), "{text}");
    assert!(text.contains("| 0 | 0 | 0 | 0 | 0 | 0 | 3 |"), "{text}");
}

#[test]
fn classification_commands() {
    let doc = json(&run(&[
        "classify-lines",
        "--max-a1",
        "3",
        "--a-abs",
        "3",
        "--b-abs",
        "9",
    ]));
    assert_eq!(doc["report"]["agreement"], true);
    assert_eq!(doc["report"]["hits"].as_array().unwrap().len(), 2);
    let doc = json(&run(&[
        "classify-omega",
        "--max-a1",
        "3",
        "--a-abs",
        "3",
        "--b-abs",
        "9",
    ]));
    assert_eq!(doc["report"]["hits"].as_array().unwrap().len(), 3);
    let doc = json(&run(&[
        "classify-pullbacks",
        "--variety",
        "1,2",
        "--g-max-abs",
        "3",
        "--rank-cap",
        "2",
    ]));
    assert_eq!(doc["report"]["agreement"], true);
    assert!(doc["report"]["hits"].as_array().unwrap().is_empty());
}

#[test]
fn default_suite_passes() {
    let cfg = path("config/default.toml");
    let out = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc = json(&out);
    let summary: Vec<&str> = doc["summary"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect();
    assert!(summary.contains(&"line-bundles: agreement"), "{summary:?}");
    assert!(summary.contains(&"omega-twists: agreement"));
    assert!(summary.contains(&"pullbacks: agreement"));
}

#[test]
fn corrupted_degree_names_riemann_roch() {
    let cfg = path("tests/fixtures/corrupt_degree.toml");
    let out = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(json(&out)["first_failure"], "hrr");
    assert!(String::from_utf8_lossy(&out.stderr).contains("hrr"));
}

#[test]
fn empty_boxes_are_vacuous() {
    let cfg = path("tests/fixtures/empty.toml");
    let out = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let doc = json(&out);
    for c in doc["checks"].as_array().unwrap() {
        assert!(c["status"] == "vacuous" || c["status"] == "info", "{c}");
    }
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = std::env::temp_dir().join(format!("scroll-ulrich-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("bad.toml");
    std::fs::write(&cfg, "[suite]\nvarietes = []\n").unwrap();
    let out = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert!(!out.status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_independent_of_worker_count() {
    let cfg = path("tests/fixtures/corrupt_degree.toml");
    let one = run(&["--workers", "1", "suite", "--config", cfg.to_str().unwrap()]);
    let four = run(&["--workers", "4", "suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(one.stdout, four.stdout);
    let one = run(&["--workers", "1", "classify-lines", "--max-a1", "3"]);
    let four = run(&["--workers", "4", "classify-lines", "--max-a1", "3"]);
    assert_eq!(one.stdout, four.stdout);
}
