//! Black-box tests of the command-line interface: argument handling, JSON
//! shapes on stdout, and the exit-code contract (0 success, 1 failed
//! verification, 2 input/usage error).

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypants"))
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("hypants-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let path = dir.join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path
}

fn stdout_json(output: &Output) -> serde_json::Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

const RIGID_REP: &str = r#"{
  "c1": {"m": [[[1,0],[2,0]],[[0,0],[1,0]]]},
  "c2": {"m": [[[1,0],[0,0]],[[-2,0],[1,0]]]}
}"#;

const RIGID_GROUP: &str = r#"{
  "generators": [
    {"name": "C1", "m": [[[1,0],[2,0]],[[0,0],[1,0]]]},
    {"name": "C2", "m": [[[1,0],[0,0]],[[-2,0],[1,0]]]}
  ],
  "lattice": {"t1": [2,0], "t2": [0,2]}
}"#;

#[test]
fn classify_rigid_representation() {
    let input = temp_file("rigid.json", RIGID_REP);
    let output = bin()
        .args(["classify", "--input", input.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    assert_eq!(json["kind"], "rigid");
    assert_eq!(json["degenerate"], false);
}

#[test]
fn classify_rejects_loxodromic_input() {
    let input = temp_file(
        "loxodromic.json",
        r#"{
          "c1": {"m": [[[2,0],[0,0]],[[0,0],[0.5,0]]]},
          "c2": {"m": [[[1,0],[0,0]],[[-2,0],[1,0]]]}
        }"#,
    );
    let output = bin()
        .args(["classify", "--input", input.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("parabolic"), "stderr: {stderr}");
}

#[test]
fn classify_rejects_malformed_json() {
    let input = temp_file("broken.json", "{ not json");
    let output = bin()
        .args(["classify", "--input", input.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_a_usage_error() {
    let output = bin()
        .args(["classify", "--input", "/nonexistent/rep.json"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn whitehead_with_relation_check() {
    let output = bin()
        .args(["whitehead", "--a", "0,2", "--check-relations"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    assert_eq!(json["relations_hold"], true);
    assert!(json["r1_residual"].as_f64().unwrap() < 1e-9);
    assert!(json["r2_residual"].as_f64().unwrap() < 1e-9);
    assert!(json["q"]["m"].is_array());
}

#[test]
fn whitehead_word_evaluation() {
    let output = bin()
        .args(["whitehead", "--a", "1", "--word", "q q"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    // At a = 1 the square of the letter matrix is [[-1,1],[-1,0]].
    assert_eq!(json["word"]["tag"], "elliptic");
    assert!(json["word"]["matrix"]["m"].is_array());
}

#[test]
fn whitehead_rejects_unknown_letter() {
    let output = bin()
        .args(["whitehead", "--a", "1", "--word", "c3"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn whitehead_rejects_zero_parameter() {
    let output = bin()
        .args(["whitehead", "--a", "0,0"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn volume_reports_pinned_keys() {
    let output = bin()
        .args(["volume", "--x", "0,1"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    let total = json["total"].as_f64().unwrap();
    assert!((total - 3.663862376708876).abs() < 1e-9);
    assert!((json["tet_volume"].as_f64().unwrap() - 0.915965594177219).abs() < 1e-9);
    assert!((json["companion"].as_f64().unwrap() - 0.915965594177219).abs() < 1e-9);
}

#[test]
fn volume_rejects_degenerate_shape() {
    let output = bin()
        .args(["volume", "--x", "1,0"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn orbit_lists_reduced_sorted_balls() {
    let group = temp_file("group.json", RIGID_GROUP);
    let output = bin()
        .args([
            "orbit",
            "--group",
            group.to_str().unwrap(),
            "--cutoff",
            "0.05",
            "--max-word-len",
            "12",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    assert_eq!(json["count"], 7);
    let balls = json["balls"].as_array().unwrap();
    assert_eq!(balls[0]["center"]["inf"], true);
    assert_eq!(balls[0]["word"], "");
    // Largest finite balls first, ties broken by real part.
    assert_eq!(balls[1]["size"], 0.25);
    assert_eq!(balls[1]["center"][0], 0.5);
    assert_eq!(balls[2]["center"][0], 1.5);
    assert_eq!(balls[3]["size"], 0.0625);
}

#[test]
fn orbit_rejects_bad_group_file() {
    let group = temp_file("bad-group.json", "[]");
    let output = bin()
        .args(["orbit", "--group", group.to_str().unwrap()])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_subset_report_shape() {
    let output = bin()
        .args(["verify", "--claims", "volume-whitehead,index-volume"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let json = stdout_json(&output);
    let claims = json["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 2);
    assert_eq!(claims[0]["id"], "volume-whitehead");
    assert_eq!(claims[1]["id"], "index-volume");
    assert_eq!(json["summary"]["fail"], 0);
    for claim in claims {
        assert!(claim["anchor"].as_str().unwrap().len() > 10);
        assert!(claim["tolerance"].is_number());
        assert_eq!(claim["verdict"], "pass");
    }
}

#[test]
fn verify_unknown_claim_is_usage_error() {
    let output = bin()
        .args(["verify", "--claims", "no-such-claim"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("no-such-claim"), "stderr: {stderr}");
}

#[test]
fn verify_report_file_matches_stdout() {
    let dir = std::env::temp_dir().join("hypants-cli-tests");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let report = dir.join("subset-report.json");
    let output = bin()
        .args([
            "verify",
            "--claims",
            "seen-area-quadratic",
            "--report",
            report.to_str().unwrap(),
        ])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(0));
    let file_bytes = std::fs::read(&report).expect("report written");
    assert_eq!(file_bytes, output.stdout);
}

#[test]
fn epsilon_flag_and_env_var_are_accepted() {
    let input = temp_file("rigid-eps.json", RIGID_REP);
    let flagged = bin()
        .args([
            "classify",
            "--input",
            input.to_str().unwrap(),
            "--epsilon",
            "1e-7",
        ])
        .output()
        .expect("binary runs");
    assert_eq!(flagged.status.code(), Some(0));

    let via_env = bin()
        .args(["classify", "--input", input.to_str().unwrap()])
        .env("HYPANTS_EPS", "1e-7")
        .output()
        .expect("binary runs");
    assert_eq!(via_env.status.code(), Some(0));
    assert_eq!(stdout_json(&flagged), stdout_json(&via_env));
}

#[test]
fn usage_error_for_unknown_flag() {
    let output = bin()
        .args(["classify", "--no-such-flag"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}
