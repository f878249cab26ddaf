//! Interface-level checks of the binary: exit codes, format parity between
//! text and JSON, timing serialization, and the cache directory.

use std::process::Command;

fn framecheck() -> Command {
    Command::new(env!("CARGO_BIN_EXE_framecheck"))
}

#[test]
fn quick_props_run_exits_zero() {
    let out = framecheck()
        .args(["props-verify", "--quick"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("props/multiple-embeddings-m2 status=verified"));
    assert!(text.contains("props/pigeonhole-100-trials status=verified"));
    assert!(text.contains("props/pigeonhole-none status=verified"));
}

#[test]
fn text_and_json_carry_the_same_fields() {
    let text_out = framecheck()
        .args(["props-verify", "--quick"])
        .output()
        .unwrap();
    let json_out = framecheck()
        .args(["props-verify", "--quick", "--format", "json"])
        .output()
        .unwrap();
    let text = String::from_utf8(text_out.stdout).unwrap();
    let doc: serde_json::Value =
        serde_json::from_slice(&json_out.stdout).expect("valid json report");
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "props-verify");
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for check in checks {
        let id = check["check_id"].as_str().unwrap();
        // Every json field appears in the text line for the same check.
        let line = text
            .lines()
            .find(|l| l.starts_with(id))
            .unwrap_or_else(|| panic!("missing text line for {id}"));
        for key in ["status", "runtime_ms", "expected", "actual", "diagnostics"] {
            assert!(line.contains(&format!("{key}=")), "{id} lacks {key}");
            assert!(check.get(key).is_some(), "json {id} lacks {key}");
        }
        for key in ["p", "n", "trunc", "seed"] {
            assert!(line.contains(&format!("{key}=")));
            assert!(check["params"].get(key).is_some());
        }
        assert_eq!(check["runtime_ms"], serde_json::Value::Null);
    }
}

#[test]
fn timings_flag_fills_runtime() {
    let out = framecheck()
        .args(["props-verify", "--quick", "--timings", "--format", "json"])
        .output()
        .unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for check in doc["checks"].as_array().unwrap() {
        assert!(
            check["runtime_ms"].is_u64(),
            "runtime must be recorded under --timings"
        );
    }
}

#[test]
fn quick_reports_are_deterministic() {
    let run = || {
        framecheck()
            .args([
                "props-verify",
                "--quick",
                "--seed",
                "11",
                "--format",
                "json",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn cache_dir_env_var_is_honored() {
    let dir = std::env::temp_dir().join(format!("framecheck-cache-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    let out = framecheck()
        .env("FRAMECHECK_CACHE_DIR", &dir)
        .args(["g0-verify"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(
        dir.join("projective-p3-d3.tbl").exists(),
        "point table cached to disk"
    );
    assert!(dir.join("projective-p3-d9.tbl").exists());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn scenario_overrides_defaults() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!("framecheck-scenario-{}.json", std::process::id()));
    std::fs::write(
        &path,
        r#"{
            "schema": 1,
            "seeds": { "default": 99 },
            "oracle": [[9841, 5]],
            "factors": [
                { "kind": "alt", "points": 5 },
                { "kind": "alt", "points": 6 }
            ]
        }"#,
    )
    .unwrap();
    let out = framecheck()
        .args(["props-verify", "--quick", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("seed=99"), "scenario seed must apply");
    let _ = std::fs::remove_file(&path);
}

#[test]
fn failing_checks_exit_nonzero() {
    // p = 4 is not prime: the construction checks report errors and the
    // process must exit 1 (not a usage error).
    let out = framecheck()
        .args(["crux-verify", "--p", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("status=error"));
}

#[test]
fn malformed_scenario_is_a_usage_error() {
    let dir = std::env::temp_dir();
    let path = dir.join(format!(
        "framecheck-bad-scenario-{}.json",
        std::process::id()
    ));
    std::fs::write(&path, r#"{ "schema": 7 }"#).unwrap();
    let out = framecheck()
        .args(["props-verify", "--quick", "--scenario"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(&path);
}
