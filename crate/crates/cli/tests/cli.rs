use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn sgspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgspec"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

const ZERO: &str = r#"{"dim": 2, "matrix": [[[0,0],[0,0]],[[0,0],[0,0]]]}"#;

#[test]
fn disc_rotation_point_mapping_passes() {
    let out = sgspec(&[
        "analyze",
        "-i",
        "catalog:disc_rotation?N=4",
        "--checks",
        "point-mapping",
        "--t",
        "1",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["version"], 1);
    assert_eq!(r["checks"][0]["id"], "point-mapping");
    assert_eq!(r["checks"][0]["verdict"], "pass");
    let rows = r["checks"][0]["details"]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["lhs_set"].as_array().unwrap().len(), 5);
}

#[test]
fn zero_generator_passes_every_check() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "zero.json", ZERO);
    let out = sgspec(&["analyze", "-i", &input, "--t", "0,1,pi"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let ids: Vec<String> = report(&out)["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        ids,
        [
            "analyze-spectrum",
            "verify-identities",
            "periodic-projections",
            "point-mapping",
            "residual-mapping",
            "resolvent-mapping",
            "eigenspaces",
            "hardy"
        ]
    );
}

#[test]
fn mismatched_pair_fails_in_rescale_residual() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "bad.json",
        r#"{"dim": 2, "matrix": [[[0,0],[-1,0]],[[1,0],[0,0]]],
            "evaluator": {"catalog": "rotation2d", "params": {"omega": 2}}}"#,
    );
    let out = sgspec(&["analyze", "-i", &input, "--checks", "verify-identities"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    let failing: Vec<&str> = r["checks"][0]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["verdict"] == "fail")
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(failing[0].starts_with("rescale_outer"), "{failing:?}");
    assert!(!failing.iter().any(|n| n.starts_with("semigroup_law")));
}

#[test]
fn mixed_verdicts_keep_both_checks() {
    let out = sgspec(&[
        "analyze",
        "-i",
        "catalog:random_stable?dim=4&seed=1&a=-0.5",
        "--checks",
        "point-mapping,periodic-projections",
    ]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["checks"][0]["verdict"], "pass");
    assert_eq!(r["checks"][1]["verdict"], "fail");
}

#[test]
fn output_is_deterministic_and_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv"] {
        let a = dir.path().join(format!("a.{format}"));
        let b = dir.path().join(format!("b.{format}"));
        for (path, threads) in [(&a, "1"), (&b, "4")] {
            let out = Command::new(env!("CARGO_BIN_EXE_sgspec"))
                .env("SGSPEC_THREADS", threads)
                .args([
                    "analyze",
                    "-i",
                    "catalog:rotation2d?omega=1",
                    "--t",
                    "0.3,1,pi",
                    "--format",
                    format,
                    "--seed",
                    "7",
                    "-o",
                ])
                .arg(path)
                .output()
                .unwrap();
            assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn csv_is_sorted_by_check_then_time() {
    let out = sgspec(&[
        "analyze",
        "-i",
        "catalog:diagonal?entries=0:0,0:2pi",
        "--checks",
        "residual-mapping,point-mapping",
        "--t",
        "pi,0.3,1",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theorem_id,t,hausdorff,verdict"));
    let keys: Vec<(String, f64)> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            let check = cols[0].split('/').next().unwrap().to_string();
            (check, cols[1].parse().unwrap_or(f64::NEG_INFINITY))
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);
    assert!(keys.first().unwrap().0 == "point-mapping");
}

#[test]
fn config_errors_exit_2() {
    assert_eq!(code(&sgspec(&["analyze", "-i", "catalog:nope"])), 2);
    assert_eq!(
        code(&sgspec(&[
            "analyze",
            "-i",
            "catalog:rotation2d",
            "--checks",
            "bogus"
        ])),
        2
    );
    assert_eq!(
        code(&sgspec(&[
            "analyze",
            "-i",
            "catalog:rotation2d",
            "--t",
            "-1"
        ])),
        2
    );
    assert_eq!(
        code(&sgspec(&["analyze", "-i", "/nonexistent/gen.json"])),
        2
    );
    let dir = tempfile::tempdir().unwrap();
    let q = write(dir.path(), "q.json", r#"{"orbit_nodes": 64, "unknown": 1}"#);
    assert_eq!(
        code(&sgspec(&[
            "analyze",
            "-i",
            "catalog:rotation2d",
            "--quadrature",
            &q
        ])),
        2
    );
}

#[test]
fn overflow_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(
        dir.path(),
        "big.json",
        r#"{"dim": 2, "matrix": [[[1000,0],[1,0]],[[0,0],[0,0]]]}"#,
    );
    let out = sgspec(&[
        "analyze",
        "-i",
        &input,
        "--checks",
        "point-mapping",
        "--t",
        "1",
    ]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn period_hint_is_used() {
    let out = sgspec(&[
        "analyze",
        "-i",
        "catalog:rotation2d?omega=1",
        "--checks",
        "periodic-projections",
        "--period-hint",
        "4pi",
    ]);
    assert_eq!(code(&out), 0);
    let period = report(&out)["checks"][0]["details"]["period"]
        .as_f64()
        .unwrap();
    assert!((period - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    let wrong = sgspec(&[
        "analyze",
        "-i",
        "catalog:rotation2d?omega=1",
        "--checks",
        "periodic-projections",
        "--period-hint",
        "3",
    ]);
    assert_eq!(code(&wrong), 1);
}

#[test]
fn catalog_lists_ids() {
    let out = sgspec(&["catalog"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("disc_rotation"));
}
