//! End-to-end tests of the binary surface: exit codes, determinism,
//! structured output, and the workspace round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

use dgcat_cli::schema::{emit_workspace, parse_workspace};

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
}

fn dgcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgcat"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn corpus_suite_passes() {
    let out = dgcat(&["corpus"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("0 failure(s)"));
}

#[test]
fn example_workspaces_run_clean() {
    for name in ["two_cycle.toml", "disc_quotient.toml", "hull_f2.toml"] {
        let path = example(name);
        let out = dgcat(&["run", "--input", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{name}: {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn single_op_filtering_works() {
    let path = example("two_cycle.toml");
    let out = dgcat(&["gamma", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("degree_record"));
    assert!(!text.contains("tor_dims"));
}

#[test]
fn missing_op_is_an_input_error() {
    let path = example("two_cycle.toml");
    let out = dgcat(&["verdier-oracle", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_command_is_an_input_error() {
    let out = dgcat(&["frobnicate", "--input", "nowhere.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = std::env::temp_dir().join("dgcat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "this is not toml [").unwrap();
    let out = dgcat(&["run", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // referential failure: a command naming a missing category
    let unresolved = dir.join("unresolved.toml");
    std::fs::write(
        &unresolved,
        "[field]\nkind = \"rationals\"\n\n[[commands]]\nop = \"h0\"\ncategory = \"nope\"\n",
    )
    .unwrap();
    let out = dgcat(&["run", "--input", unresolved.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let path = example("disc_quotient.toml");
    let a = dgcat(&["run", "--input", path.to_str().unwrap(), "--format", "structured"]);
    let b = dgcat(&["run", "--input", path.to_str().unwrap(), "--format", "structured"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    // and the structured output is valid JSON
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["failures"], 0);
}

#[test]
fn degree_flag_overrides_the_command() {
    let path = example("hull_f2.toml");
    let out = dgcat(&[
        "quotient-cohomology",
        "--input",
        path.to_str().unwrap(),
        "--degree",
        "2",
        "--format",
        "structured",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let coh = &v["commands"][0]["records"]["cohomology"];
    assert!(coh.get("2").is_some(), "{coh}");
    assert!(coh.get("0").is_none());
}

#[test]
fn output_flag_writes_the_report() {
    let dir = std::env::temp_dir().join("dgcat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let outfile = dir.join("report.json");
    let path = example("two_cycle.toml");
    let out = dgcat(&[
        "stratifying",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "structured",
        "--output",
        outfile.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&outfile).unwrap()).unwrap();
    assert_eq!(v["commands"][0]["records"]["verdict"], "NOT_STRATIFYING");
}

#[test]
fn workspace_round_trip_is_equivalent() {
    for name in ["two_cycle.toml", "disc_quotient.toml", "hull_f2.toml"] {
        let text = std::fs::read_to_string(example(name)).unwrap();
        let parsed = parse_workspace(&text).unwrap();
        let emitted = emit_workspace(&parsed).unwrap();
        let reparsed = parse_workspace(&emitted).unwrap();
        assert_eq!(parsed, reparsed, "round trip diverges for {name}");
    }
}
