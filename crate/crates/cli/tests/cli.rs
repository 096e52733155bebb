use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn symcat(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_symcat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn symcat");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout line is JSON"))
        .collect()
}

fn tmp_file(name: &str, contents: &[u8]) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("symcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn sample_pipes_into_check() {
    let sampled = symcat(
        &[
            "sample", "--space", "ai", "--n", "3", "--count", "2", "--seed", "7",
        ],
        None,
    );
    assert!(sampled.status.success());
    assert_eq!(records(&sampled).len(), 2);

    let checked = symcat(&["check"], Some(&sampled.stdout));
    assert!(checked.status.success());
    let verdicts = records(&checked);
    assert_eq!(verdicts.len(), 2);
    assert!(verdicts.iter().all(|v| v["member"] == Value::Bool(true)));
}

#[test]
fn sample_output_feeds_every_consumer() {
    let sampled = symcat(
        &[
            "sample", "--space", "aii", "--n", "2", "--count", "3", "--seed", "11",
        ],
        None,
    );
    for cmd in [
        vec!["factor"],
        vec!["log"],
        vec!["contract", "--steps", "4"],
        vec!["cover"],
    ] {
        let out = symcat(&cmd, Some(&sampled.stdout));
        assert!(
            out.status.success(),
            "{cmd:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert_eq!(records(&out).len(), 3, "{cmd:?}");
    }
}

#[test]
fn sampling_is_deterministic() {
    let args = [
        "sample", "--space", "aii", "--n", "3", "--count", "4", "--seed", "42",
    ];
    let a = symcat(&args, None);
    let b = symcat(&args, None);
    assert_eq!(a.stdout, b.stdout);
    let c = symcat(
        &[
            "sample", "--space", "aii", "--n", "3", "--count", "4", "--seed", "43",
        ],
        None,
    );
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn table_csv_matches_golden() {
    let out = symcat(&["table", "--format", "csv"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    let golden = include_str!("../../core/tests/golden/table.csv");
    assert_eq!(text, golden);
}

#[test]
fn contract_aii_stays_in_the_space() {
    let sampled = symcat(
        &["sample", "--space", "aii", "--n", "2", "--seed", "5"],
        None,
    );
    let input = tmp_file("m.json", &sampled.stdout);
    let out = symcat(
        &[
            "contract",
            "--space",
            "aii",
            "--n",
            "2",
            "--input",
            input.to_str().unwrap(),
            "--alpha-from-cover",
            "--steps",
            "8",
        ],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = &records(&out)[0];
    let samples = path.as_array().unwrap();
    assert_eq!(samples.len(), 9);
    for s in samples {
        let r = &s["residuals"];
        for key in ["unitarity", "determinant", "symmetry"] {
            assert!(r[key].as_f64().unwrap() <= 1e-8, "{key} at s = {}", s["s"]);
        }
    }
}

#[test]
fn bare_matrix_needs_space() {
    let identity = br#"{"n":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}"#;
    let out = symcat(&["check"], Some(identity));
    assert_eq!(out.status.code(), Some(2));
    let out = symcat(&["check", "--space", "ai"], Some(identity));
    assert!(out.status.success());
}

#[test]
fn domain_errors_exit_with_one() {
    let identity = br#"{"n":2,"entries":[[1,0],[0,0],[0,0],[1,0]]}"#;
    // 1 is an eigenvalue, so the branch cut at angle 0 is hit
    let out = symcat(&["log", "--space", "ai", "--alpha", "0"], Some(identity));
    assert_eq!(out.status.code(), Some(1));

    let not_symmetric = br#"{"n":2,"entries":[[0,0],[1,0],[-1,0],[0,0]]}"#;
    let out = symcat(&["check", "--space", "ai"], Some(not_symmetric));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(records(&out)[0]["member"], Value::Bool(false));

    let out = symcat(&["describe", "bdi", "2", "2"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(
        symcat(&["sample", "--space", "ai", "--n", "3"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        symcat(&["table", "--format", "xml"], None).status.code(),
        Some(2)
    );
    assert_eq!(
        symcat(&["describe", "e6", "1"], None).status.code(),
        Some(2)
    );
    assert_eq!(symcat(&["check"], Some(b"not json")).status.code(), Some(2));
}

#[test]
fn cover_audit_reports_full_coverage() {
    let out = symcat(
        &[
            "cover", "--audit", "--space", "aii", "--n", "2", "--trials", "200", "--seed", "9",
        ],
        None,
    );
    assert!(out.status.success());
    let report = &records(&out)[0];
    assert_eq!(report["covered_fraction"].as_f64(), Some(1.0));
    assert_eq!(report["multiplicity_failures"].as_u64(), Some(0));
}

#[test]
fn describe_grassmannian_remark_row() {
    let out = symcat(&["describe", "ai", "4"], None);
    let d = &records(&out)[0];
    assert_eq!(d["dimension"].as_u64(), Some(9));
    assert_eq!(d["cat_exact"]["known"].as_u64(), Some(3));
}
