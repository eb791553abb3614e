use std::path::PathBuf;
use std::process::{Command, Output};

fn problem(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems").join(name)
}

fn rootsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rootsel")).args(args).output().expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = rootsel(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    problem(name).to_string_lossy().into_owned()
}

#[test]
fn solve_exit_codes() {
    let (code, out, _) = run(&["solve", &path("quadratic.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("\"status\": \"found\""));
    let (code, out, _) = run(&["solve", &path("zigzag.json")]);
    assert_eq!(code, 2);
    assert!(out.contains("\"cut_vertex\""));
    let (code, _, err) = run(&["solve", "/nonexistent/problem.json"]);
    assert_eq!(code, 1);
    assert!(err.starts_with("error:"));
}

#[test]
fn hypothesis_violation_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let text = std::fs::read_to_string(problem("quadratic.json")).unwrap().replace("\"u\": \"u\"", "\"u\": \"v\"");
    std::fs::write(&file, text).unwrap();
    let (code, _, err) = run(&["solve", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("hypothesis violated"), "{err}");
}

#[test]
fn parse_errors_name_the_location() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    let text = std::fs::read_to_string(problem("quadratic.json")).unwrap().replace("\"f2\"\n", "\"g\"\n");
    std::fs::write(&file, text).unwrap();
    let (code, _, err) = run(&["solve", file.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("poly.roots[1]"), "{err}");
}

#[test]
fn certificates_are_deterministic_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let (code, _, _) = run(&["solve", &path("zigzag.json"), "--out", out.to_str().unwrap()]);
        assert_eq!(code, 2);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (code, svg, _) = run(&["plot", a.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(svg.starts_with("<svg") && svg.contains("class=\"cut\""));
}

#[test]
fn several_files_go_to_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let (code, _, _) = run(&[
        "solve",
        &path("quadratic.json"),
        &path("zigzag.json"),
        &path("crooked.json"),
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    for name in ["quadratic.csv", "zigzag.csv", "crooked.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let csv = std::fs::read_to_string(out.join("quadratic.csv")).unwrap();
    assert_eq!(csv, "vertex,x,w\n-1,-1,-1/2\n0,0,0\n1,1,-1/2\n");
}

#[test]
fn other_subcommands() {
    let (code, out, _) = run(&["quad", &path("monic.json"), "--tolerance", "1/100"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"bound\""));
    let (code, _, _) = run(&["select", &path("triangle.json")]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["crochet-check", &path("constant_cubic.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("\"passed\": true"));
    let (code, out, _) = run(&["fspace-probe", &path("sign_change.json")]);
    assert_eq!(code, 2);
    assert!(out.contains("1/2"));
    let (code, _, _) = run(&["crooked-gen", "--links", "4", "--level", "2"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["crooked-gen", "--links", "3", "--level", "0"]);
    assert_eq!(code, 2);
    let (code, out, _) = run(&["sort", &path("constant_cubic.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("\"lattice\""));
    let (code, out, _) = run(&["zigzag"]);
    assert_eq!(code, 0);
    assert_eq!(out, std::fs::read_to_string(problem("zigzag.json")).unwrap());
}

#[test]
fn failed_pattern_check_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("pat.json");
    let text = std::fs::read_to_string(problem("constant_cubic.json"))
        .unwrap()
        .replace("\"X\": [\n        \"v0\",\n        \"e0\",\n        \"v1\"\n      ]", "\"X\": [\"v0\"]");
    std::fs::write(&file, text).unwrap();
    let (code, out, _) = run(&["crochet-check", file.to_str().unwrap()]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("X_1 ∪ Y_1 ∪ Z_1 = X"));
}
