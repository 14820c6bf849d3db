use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn regsolve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regsolve")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

fn problem_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("regsolve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn have_z3() -> bool {
    Command::new("z3").arg("-version").output().is_ok()
}

#[test]
fn match_reports_captures() {
    let o = regsolve(&["match", "a|((b)*c)*d", "bbbbcbcd"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["captures"], serde_json::json!(["bbbbcbcd", "bc", "b"]));
    assert_eq!(v["index"], 0);
}

#[test]
fn sticky_match_moves_last_index() {
    let o = regsolve(&["match", "goo+d", "goood", "--flags", "y"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lastIndexAfter"], 5);
    let o = regsolve(&["match", "goo+d", "xgoood", "--flags", "y"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["captures"], serde_json::Value::Null);
}

#[test]
fn bad_pattern_is_an_error() {
    let o = regsolve(&["match", "(a", "a"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_subcommand_is_an_error() {
    assert_eq!(regsolve(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(regsolve(&["--help"]).status.code(), Some(0));
}

#[test]
fn compile_declares_capture_pairs() {
    let p = problem_file("pairs.txt", "var w\nin w /(a)(b)?/ captures C0 C1 C2\n");
    let o = regsolve(&["compile", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for c in ["C0", "C1", "C2"] {
        assert!(text.lines().filter(|l| l.starts_with("(declare-") && l.contains(c)).count() >= 2, "{c} in\n{text}");
    }
    assert!(text.trim_end().ends_with("(check-sat)"));
}

#[test]
fn compile_rejects_unicode_flag() {
    let p = problem_file("uflag.txt", "var w\nin w /a/u\n");
    let o = regsolve(&["compile", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unsupported flag u"));
}

#[test]
fn compile_reports_position_of_syntax_errors() {
    let p = problem_file("syntax.txt", "var w\nin w a/\n");
    let o = regsolve(&["compile", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn solve_exit_codes() {
    if !have_z3() {
        return;
    }
    let sat = problem_file("sat.txt", "var w maxlen 40\nin w /<(\\w+)>([0-9]*)<\\/\\1>/ captures C0 C1 C2 exec\neq C1 \"timeout\"\nnotin C2 /^[0-9]+$/\n");
    let o = regsolve(&["solve", sat.to_str().unwrap(), "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "sat");
    assert_eq!(v["model"]["captures"]["C1"], "timeout");

    let unsat = problem_file("unsat.txt", "var w maxlen 6\nin w /^a*(a)?$/ captures C0 C1\neq w \"aa\"\neq C1 \"a\"\n");
    let o = regsolve(&["solve", unsat.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["refinements"], 1);

    let o = regsolve(&["solve", unsat.to_str().unwrap(), "--refinement-limit", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_with_missing_solver_is_an_error() {
    let p = problem_file("nosolver.txt", "var w\nin w /a/\n");
    let o = regsolve(&["solve", p.to_str().unwrap(), "--solver-cmd", "/nonexistent/solver"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn scan_fixture_csv() {
    let o = regsolve(&["scan", fixture("corpus").to_str().unwrap(), "--csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(fixture("corpus_report.csv")).unwrap());
}

#[test]
fn scan_empty_and_missing_directories() {
    let dir = std::env::temp_dir().join(format!("regsolve-empty-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = regsolve(&["scan", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
    assert_eq!(regsolve(&["scan", dir.join("missing").to_str().unwrap()]).status.code(), Some(3));
}
