//! Golden outputs for the command line. Each `golden/<name>.out` holds the
//! exit code on its first line and standard output after it. Set
//! `UPDATE_GOLDEN=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::Command;

const CASES: &[(&str, &[&str])] = &[
    ("check_ok", &["check", "obstructed_n2.dgm"]),
    ("check_not_differential", &["check", "not_differential.dgm"]),
    ("check_malformed", &["check", "malformed.dgm"]),
    ("check_missing", &["check", "missing.dgm"]),
    (
        "cohomology",
        &[
            "cohomology",
            "polynomial_n2.dgm",
            "--p",
            "0",
            "--p",
            "1",
            "--p",
            "2",
        ],
    ),
    (
        "obstruction_cobounds",
        &["obstruction", "polynomial_n2.dgm", "--order", "1"],
    ),
    (
        "obstruction_blocked",
        &["obstruction", "obstructed_n2.dgm", "--order", "2"],
    ),
    (
        "deform_obstructed",
        &["deform", "obstructed_n2.dgm", "--order", "5"],
    ),
    (
        "deform_canonical",
        &[
            "deform",
            "obstructed_n2.dgm",
            "--order",
            "5",
            "--lifts",
            "canonical",
        ],
    ),
    (
        "deform_polynomial",
        &["deform", "polynomial_n3.dgm", "--order", "6"],
    ),
    (
        "trivialize_linear",
        &["trivialize", "linear.dgm", "--order", "2"],
    ),
    (
        "trivialize_rigid",
        &["trivialize", "rigid.dgm", "--order", "3"],
    ),
    ("verify_n1", &["verify-paper", "--n", "1"]),
    ("verify_n3", &["verify-paper", "--n", "3"]),
    (
        "verify_n2_gf2",
        &["verify-paper", "--n", "2", "--field", "GF:2"],
    ),
    (
        "verify_bad_field",
        &["verify-paper", "--n", "2", "--field", "GF:6"],
    ),
    (
        "family_obstructed_n2",
        &["paper-family", "--n", "2", "--variant", "obstructed"],
    ),
    (
        "family_bad_order",
        &["paper-family", "--n", "1", "--variant", "polynomial"],
    ),
];

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgdeform"))
        .args(args)
        .current_dir(golden_dir())
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exited normally"),
        String::from_utf8(out.stdout).expect("utf-8 output"),
    )
}

#[test]
fn golden_outputs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, args) in CASES {
        let (code, stdout) = run(args);
        let actual = format!("exit: {code}\n{stdout}");
        let path = golden_dir().join(format!("{name}.out"));
        if update {
            std::fs::write(&path, &actual).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_default();
        if expected != actual {
            mismatches.push(format!(
                "{name}:\n--- expected\n{expected}--- actual\n{actual}"
            ));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn exit_code_contract() {
    assert_eq!(run(&["verify-paper", "--n", "3"]).0, 0);
    let (code, out) = run(&["deform", "obstructed_n2.dgm", "--order", "5"]);
    assert_eq!(code, 1);
    assert!(out.contains("obstructed at order 2"));
    assert_eq!(run(&["check", "malformed.dgm"]).0, 2);
    assert_eq!(run(&["check", "not_differential.dgm"]).0, 1);
    assert_eq!(run(&["nonsense"]).0, 2);
}

#[test]
fn emitted_family_matches_checked_in_input() {
    let (code, out) = run(&["paper-family", "--n", "2", "--variant", "obstructed"]);
    assert_eq!(code, 0);
    let file = std::fs::read_to_string(golden_dir().join("obstructed_n2.dgm")).unwrap();
    assert_eq!(out, file);
}

#[test]
fn malformed_input_reports_position_on_stderr() {
    let out = Command::new(env!("CARGO_BIN_EXE_dgdeform"))
        .args(["check", "malformed.dgm"])
        .current_dir(golden_dir())
        .output()
        .unwrap();
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 6, column"), "{err}");
    assert!(out.stdout.is_empty());
}
