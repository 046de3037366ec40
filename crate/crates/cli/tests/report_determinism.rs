//! Trial-level parallelism must not change what a run reports.

use std::process::Command;

fn run_json(args: &[&str]) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_relqc"))
        .args(args)
        .output()
        .expect("spawn relqc");
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("report json")
}

#[test]
fn jobs_do_not_change_results() {
    let base = ["run", "--protocol", "coin", "--trials", "400", "--seed", "3"];
    let sequential = run_json(&[&base[..], &["--jobs", "1"]].concat());
    let parallel = run_json(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(sequential["results"], parallel["results"]);
}

#[test]
fn config_errors_name_the_field() {
    let out = Command::new(env!("CARGO_BIN_EXE_relqc"))
        .args(["run", "--protocol", "dice"])
        .output()
        .expect("spawn relqc");
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`protocol`"), "stderr: {err}");

    let out = Command::new(env!("CARGO_BIN_EXE_relqc"))
        .args(["attack", "--strategy", "position-spoof"])
        .output()
        .expect("spawn relqc");
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`offset`"), "stderr: {err}");
}

#[test]
fn single_trial_reports_embed_the_transcript() {
    let report = run_json(&[
        "run",
        "--protocol",
        "core",
        "--forced-alpha",
        "00",
        "--forced-beta",
        "11",
        "--sigma-a",
        "I",
        "--sigma-b",
        "I",
        "--pairs",
        "00,00",
    ]);
    let transcript = &report["transcripts"][0];
    assert_eq!(transcript["schema"], "transcript/v1");
    assert_eq!(transcript["outputs"]["sigma_i"], "ZX");
    assert_eq!(transcript["verdict"], "accept");
    // Multi-trial reports aggregate only.
    let report = run_json(&["run", "--protocol", "bc", "--trials", "3"]);
    assert!(report.get("transcripts").is_none());
}
