#![allow(dead_code)]

use std::path::PathBuf;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// Runs the CLI in-process; arguments ending in `.json` that name a fixture
/// are resolved against the fixture directory.
pub fn run(args: &[&str]) -> Output {
    let mut argv = vec!["qmaxent".to_string()];
    for a in args {
        let p = fixture(a);
        if a.ends_with(".json") && p.exists() {
            argv.push(p.display().to_string());
        } else {
            argv.push(a.to_string());
        }
    }
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = qmaxent_cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).expect("utf-8 stdout"),
        stderr: String::from_utf8(err).expect("utf-8 stderr"),
    }
}

/// The single-line JSON error object written on failure.
pub fn error_kind(o: &Output) -> String {
    assert_eq!(o.stderr.lines().count(), 1, "stderr: {}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(o.stderr.trim()).expect("error is JSON");
    assert_eq!(v["exit_code"].as_i64(), Some(o.code as i64));
    v["error"].as_str().expect("error kind").to_string()
}

/// Golden cases: name, arguments.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    (
        "estimate_qubit_xz",
        &["estimate", "--problem", "qubit_xz.json", "--tol", "1e-10"],
    ),
    (
        "estimate_qubit_y",
        &["estimate", "--problem", "qubit_y.json"],
    ),
    (
        "estimate_qutrit",
        &["estimate", "--problem", "qutrit_gellmann.json"],
    ),
    (
        "estimate_ququart",
        &["estimate", "--problem", "ququart_spin.json"],
    ),
    (
        "tilt_noncommuting",
        &["tilt", "--problem", "tilt_noncommuting.json"],
    ),
    ("tilt_qutrit", &["tilt", "--problem", "tilt_qutrit.json"]),
    (
        "flow_sigma_z",
        &[
            "flow",
            "--problem",
            "flow_sigma_z.json",
            "--lambda-end",
            "1.0",
            "--step",
            "1e-3",
        ],
    ),
    (
        "flow_to_target",
        &["flow", "--problem", "tilt_noncommuting.json"],
    ),
    (
        "metric_qubit",
        &["metric", "--problem", "metric_qubit.json"],
    ),
    ("entropy_mixed", &["entropy", "--state", "mixed.json"]),
    (
        "rel_entropy_mixed",
        &[
            "rel-entropy",
            "--state",
            "mixed.json",
            "--prior",
            "uniform.json",
        ],
    ),
];

pub fn golden_path(name: &str) -> PathBuf {
    fixture("golden").join(format!("{name}.json"))
}
