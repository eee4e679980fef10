mod common;

use common::{golden_path, run, GOLDEN_CASES};

/// Set `QMAXENT_BLESS=1` to rewrite the golden files from the current build.
#[test]
fn outputs_match_golden_files() {
    let bless = std::env::var_os("QMAXENT_BLESS").is_some();
    for (name, args) in GOLDEN_CASES {
        let out = run(args);
        assert_eq!(out.code, 0, "{name}: {}", out.stderr);
        assert!(out.stderr.is_empty());
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &out.stdout).unwrap();
            continue;
        }
        let expected =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(out.stdout, expected, "{name} differs from its golden file");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for (name, args) in GOLDEN_CASES {
        let first = run(args);
        let second = run(args);
        assert_eq!(first.stdout, second.stdout, "{name}");
    }
}
