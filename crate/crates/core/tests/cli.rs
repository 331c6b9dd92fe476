use std::path::PathBuf;
use std::process::Command;

use acslab_core::cli::{execute, Outcome, EXIT_DATA, EXIT_OK, EXIT_USAGE};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn acslab(args: &[&str]) -> Outcome {
    execute(std::iter::once("acslab").chain(args.iter().copied()))
}

/// Compares against `tests/golden/<name>.txt`; set `UPDATE_GOLDEN=1` to rewrite.
fn assert_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn kv(stdout: &str) -> Vec<(String, String)> {
    let block = stdout.rsplit("---\n").next().unwrap();
    block
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn value(stdout: &str, key: &str) -> String {
    kv(stdout).into_iter().find(|(k, _)| k == key).map(|(_, v)| v).unwrap_or_default()
}

#[test]
fn cohomology_of_example_algebra() {
    let out = acslab(&["--spec", &data("example.toml"), "cohomology"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    for line in ["b1=2", "b2=4", "b3=6"] {
        assert!(out.stdout.lines().any(|l| l == line), "missing {line}");
    }
    assert_golden("cohomology_example", &out.stdout);
}

#[test]
fn invariant_reports() {
    let out = acslab(&["--spec", &data("example.toml"), "invariant"]);
    assert_eq!(out.code, EXIT_OK);
    assert_golden("invariant_example", &out.stdout);

    let out = acslab(&["--spec", &data("su2.toml"), "invariant"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("pure=false full=true"));
    assert_golden("invariant_su2", &out.stdout);
}

#[test]
fn validate_report() {
    let out = acslab(&["--spec", &data("example.toml"), "validate"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(value(&out.stdout, "integrable"), "false");
    assert_golden("validate_example", &out.stdout);
}

#[test]
fn frame_and_hodge_reports() {
    let out = acslab(&["--spec", &data("plane4.toml"), "frame"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_golden("frame_plane4", &out.stdout);

    let out = acslab(&["--spec", &data("frame8.toml"), "frame", "--format", "kv"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(value(&out.stdout, "anti_invariant"), "true");
    assert_eq!(value(&out.stdout, "omega_matches_input"), "true");

    let out = acslab(&["--spec", &data("plane4.toml"), "hodge"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_golden("hodge_plane4", &out.stdout);
}

#[test]
fn rank_scan_report() {
    let out = acslab(&["rank-scan", "--samples", "2000", "--seed", "3"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(value(&out.stdout, "dichotomy"), "true");
    let counts: usize = ["rank0", "rank4"].iter().map(|k| value(&out.stdout, k).parse::<usize>().unwrap()).sum();
    assert_eq!(counts, 2000);
    assert_golden("rank_scan_seed3", &out.stdout);
}

#[test]
fn rank_scan_writes_report_and_csv() {
    let dir = std::env::temp_dir().join(format!("acslab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.txt");
    let csv = dir.join("samples.csv");
    let out = acslab(&[
        "rank-scan",
        "--samples",
        "50",
        "--report",
        report.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_OK);
    assert!(std::fs::read_to_string(&report).unwrap().contains("unique continuation"));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 51);
    assert!(rows.starts_with("x1,x2,x3,x4,x5,x6,rank,smallest_retained"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kv_format_prints_only_the_block() {
    let out = acslab(&["--spec", &data("torus.toml"), "cohomology", "--format", "kv"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("b0=1\n"));
    assert_eq!(value(&out.stdout, "betti"), "1,6,15,20,15,6,1");
}

#[test]
fn exit_codes() {
    assert_eq!(acslab(&["bogus"]).code, EXIT_USAGE);
    assert_eq!(acslab(&[]).code, EXIT_USAGE);
    assert_eq!(acslab(&["cohomology"]).code, EXIT_USAGE);
    assert_eq!(acslab(&["rank-scan", "--samples", "many"]).code, EXIT_USAGE);
    assert_eq!(acslab(&["--help"]).code, EXIT_OK);

    let out = acslab(&["--spec", &data("bad_jacobi.toml"), "validate"]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("jacobi error"), "{}", out.stderr);
    let out = acslab(&["--spec", &data("bad_structure.toml"), "validate"]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("structure error"), "{}", out.stderr);
    let out = acslab(&["--spec", &data("bad_syntax.toml"), "validate"]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("syntax error"), "{}", out.stderr);
    assert_eq!(acslab(&["--spec", &data("missing.toml"), "validate"]).code, EXIT_DATA);

    let out = acslab(&["--spec", &data("frame6.toml"), "frame"]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("n even"), "{}", out.stderr);
    let out = acslab(&["--spec", &data("torus.toml"), "frame"]);
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("[frame]"));
    assert_eq!(acslab(&["--spec", &data("torus.toml"), "invariant"]).code, EXIT_DATA);
    assert_eq!(acslab(&["--spec", &data("example.toml"), "hodge"]).code, EXIT_DATA);
}

#[test]
fn binary_matches_library_entry_point() {
    let out = Command::new(env!("CARGO_BIN_EXE_acslab"))
        .args(["--spec", &data("example.toml"), "cohomology"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = acslab(&["--spec", &data("example.toml"), "cohomology"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);

    let out = Command::new(env!("CARGO_BIN_EXE_acslab")).arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
}
