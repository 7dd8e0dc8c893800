use std::io::Write;
use std::process::{Command, Output, Stdio};

fn envelope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_envelope")).args(args).output().expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_envelope"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn normal_form_reorders_generators() {
    let o = envelope(&["nf", "-e", "X4*X3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "X3*X4 - 2*X1\n");
}

#[test]
fn normal_form_as_json() {
    let o = envelope(&["nf", "-e", "X4*X3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["normal_form"], "X3*X4 - 2*X1");
    assert_eq!(v["degree"], 2);
    assert_eq!(v["terms"], 2);
}

#[test]
fn commutators_of_named_elements() {
    assert_eq!(stdout(&envelope(&["comm", "X5", "X6"])), "2*X1 + 2*X2\n");
    assert_eq!(stdout(&envelope(&["nf", "-e", "comm(T1,T3)+T12"])), "0\n");
    assert_eq!(stdout(&envelope(&["--env", "contracted", "comm", "X'3", "X'4"])), "0\n");
}

#[test]
fn canonical_poisson_bracket() {
    assert_eq!(stdout(&envelope(&["pb", "x1", "p1"])), "1\n");
}

#[test]
fn hamiltonian_commutes_modulo_constraints() {
    let o = envelope(&["pb", "H", "T1", "--ideal", "sphere+momentum"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("0\n"));
}

#[test]
fn contraction_dump_matches_golden() {
    let o = envelope(&["contract", "--weights", "0,0,1,1,0,0,1,1", "--dump"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("contract_dump.txt"));
}

#[test]
fn failing_group_exits_one_with_golden_report() {
    let o = envelope(&["verify", "--group", "sec3.ladder"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), golden("verify_ladder.txt"));
}

#[test]
fn bracket_table_verifies_as_json() {
    let o = envelope(&["verify", "--group", "sec3.table", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["counts"]["PASS"], 28);
    assert_eq!(v["counts"]["FAIL"], 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify", "--group", "sec4.ybasis", "--format", "json"];
    assert_eq!(envelope(&args).stdout, envelope(&args).stdout);
}

#[test]
fn driver_errors_exit_two() {
    let o = envelope(&["verify", "--group", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sec3.table"));

    let o = envelope(&["nf", "-e", "X9"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr(&o), "error: 1:1: unknown generator X9\n");

    let o = envelope(&["nf", "-e", "2*"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: 1:3:"));

    assert_eq!(envelope(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn repl_reads_standard_input() {
    let o = with_stdin(&["repl"], "let a = X5\ncomm(a, X6)\nX9\n:quit\nX1\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o), "2*X1 + 2*X2\nerror: 1:1: unknown generator X9\n");
}

// [X1,X2] = X3, [X1,X3] = X1 violates the Jacobi identity.
const BAD_TABLE: &str = r#"{"name": "bad", "dim": 3, "labels": ["X1", "X2", "X3"], "brackets": [
  {"i": 1, "j": 2, "terms": [{"k": 3, "c": "1"}]},
  {"i": 1, "j": 3, "terms": [{"k": 1, "c": "1"}]}
]}"#;

#[test]
fn algebra_file_is_checked_unless_asked_not_to() {
    let dir = std::env::temp_dir().join(format!("envelope-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, BAD_TABLE).unwrap();
    let bad = bad.to_str().unwrap();

    let o = envelope(&["--algebra", bad, "nf", "-e", "X2*X1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).to_lowercase().contains("jacobi"), "{}", stderr(&o));

    let o = envelope(&["--algebra", bad, "--no-jacobi-check", "nf", "-e", "X2*X1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "X1*X2 - X3\n");

    let good = dir.join("su3.json");
    let dump = envelope(&["contract", "--weights", "0,0,0,0,0,0,0,0", "--dump", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&dump.stdout).unwrap();
    std::fs::write(&good, v["algebra"].to_string()).unwrap();
    let o = envelope(&["--algebra", good.to_str().unwrap(), "comm", "X5", "X6"]);
    assert_eq!(stdout(&o), "2*X1 + 2*X2\n");
    std::fs::remove_dir_all(&dir).unwrap();
}
