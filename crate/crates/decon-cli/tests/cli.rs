//! End-to-end checks of the CLI surface: exit codes, trace files, the
//! verifier, and generator determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn decon() -> Command {
    Command::new(env!("CARGO_BIN_EXE_decon"))
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run_ok(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn wheel_scenario_exit_codes() {
    let scenario = scenarios_dir().join("wheel9_ided.toml");
    let tmp = tempdir();

    // Budget n-1 stalls: exit code 3.
    let out = decon()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(tmp.join("stall.trace.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", run_ok(&out));

    // Budget d+2k sweeps the wheel: exit code 0.
    let out = decon()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .args(["--agents", "d+2k"])
        .arg("--out")
        .arg(tmp.join("clean.trace.jsonl"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", run_ok(&out));

    // Both traces pass independent verification.
    for name in ["stall.trace.jsonl", "clean.trace.jsonl"] {
        let out = decon().arg("verify-trace").arg(tmp.join(name)).output().unwrap();
        assert_eq!(out.status.code(), Some(0), "{name}: {}", run_ok(&out));
    }
}

#[test]
fn figure4_scenario_succeeds_at_d_plus_k() {
    let scenario = scenarios_dir().join("figure4_ftea.toml");
    let out = decon()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", run_ok(&out));
    assert!(run_ok(&out).contains("FullSuccess"));
}

#[test]
fn bipartite_scenario_stalls_under_provisioned() {
    let scenario = scenarios_dir().join("k44_static.toml");
    let out = decon()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", run_ok(&out));
}

#[test]
fn verify_trace_rejects_tampering() {
    let scenario = scenarios_dir().join("figure4_ftea.toml");
    let tmp = tempdir();
    let trace_path = tmp.join("fig4.trace.jsonl");
    let out = decon()
        .args(["run", "--scenario"])
        .arg(&scenario)
        .arg("--out")
        .arg(&trace_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    // Retarget one recorded move to a wrong node.
    let text = std::fs::read_to_string(&trace_path).unwrap();
    let tampered = text.replacen("\"action\":\"move:0\"", "\"action\":\"move:1\"", 1);
    assert_ne!(text, tampered, "expected a move:0 action in the trace");
    std::fs::write(&trace_path, tampered).unwrap();

    let out = decon().arg("verify-trace").arg(&trace_path).output().unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", run_ok(&out));
    assert!(run_ok(&out).contains("divergence"));
}

#[test]
fn generate_is_byte_stable() {
    let gen = || {
        let out = decon()
            .args([
                "generate",
                "--family",
                "random_connected",
                "--n",
                "10",
                "--k",
                "4",
                "--seed",
                "9",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(gen(), gen());

    let out = decon()
        .args(["generate", "--family", "figure4", "--d", "3", "--k", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n 7\n"));
    assert_eq!(text.lines().count(), 10, "header plus nine edges");
}

#[test]
fn experiment_runs_a_small_matrix() {
    let tmp = tempdir();
    let config = tmp.join("matrix.toml");
    std::fs::write(
        &config,
        r#"
        seeds = [1]
        [corpus]
        count = 3
        n_min = 5
        n_max = 7
        [[cell]]
        name = "smoke-uni"
        family = "random"
        regime = "any"
        model = "ftea"
        t = 1
        adversary = "static"
        strategy = "uni"
        agents = "n"
        "#,
    )
    .unwrap();
    let out = decon()
        .args(["experiment", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&tmp)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", run_ok(&out));
    assert!(run_ok(&out).contains("smoke-uni"));
    let metrics = std::fs::read_to_string(tmp.join("smoke-uni.metrics.txt")).unwrap();
    assert!(metrics.contains("FullSuccess"));
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "decon-cli-test-{}-{:?}",
        std::process::id(),
        std::thread::current().id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
