//! Executes every `relqc` invocation shown in the README and requires it to
//! succeed, so the documentation cannot drift from the binary.

use std::path::Path;
use std::process::Command;

fn readme_commands() -> Vec<Vec<String>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let text = std::fs::read_to_string(&path).expect("read README.md");
    let mut commands = Vec::new();
    let mut in_console = false;
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with("```") {
            in_console = trimmed == "```console" || trimmed == "```sh" || trimmed == "```bash";
            continue;
        }
        if !in_console {
            continue;
        }
        let cmd = trimmed.strip_prefix("$ ").unwrap_or(trimmed);
        if let Some(rest) = cmd.strip_prefix("relqc ") {
            commands.push(rest.split_whitespace().map(str::to_string).collect());
        }
    }
    commands
}

#[test]
fn every_readme_example_runs() {
    let commands = readme_commands();
    assert!(!commands.is_empty(), "README contains no relqc examples");
    for args in &commands {
        let out = Command::new(env!("CARGO_BIN_EXE_relqc"))
            .args(args)
            .output()
            .expect("spawn relqc");
        assert!(
            out.status.success(),
            "relqc {} failed with status {:?}\nstderr: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    println!("executed {} README examples", commands.len());
}
