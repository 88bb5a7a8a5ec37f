use std::fs;
use std::process::{Command, Output};

fn fibauto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibauto"))
        .args(args)
        .env_remove("FIBAUTO_STORE")
        .env_remove("FIBAUTO_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sequence_output() {
    let o = fibauto(&["seq", "t", "18"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0,2,3,5,7,8,10,11,13,15,16,18,20,21,23,24,26,28\n");

    let o = fibauto(&["seq", "r", "21"]);
    assert_eq!(stdout(&o), "0,1,2,1,3,2,4,5,3,6,7,4,8,5,9,10,6,11,7,12,13\n");

    let o = fibauto(&["--format", "bfile", "seq", "p", "3"]);
    assert_eq!(stdout(&o), "0 0\n1 1\n2 1\n");
    let o = fibauto(&["--format", "csv", "seq", "s", "2"]);
    assert_eq!(stdout(&o), "n,s\n0,0\n1,2\n");
}

#[test]
fn output_is_repeatable() {
    assert_eq!(stdout(&fibauto(&["seq", "hp", "40"])), stdout(&fibauto(&["seq", "hp", "40"])));
}

#[test]
fn array_matches_golden_table() {
    let o = fibauto(&["array", "9", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("../../core/golden/table1.txt");
    assert_eq!(stdout(&o).trim_end(), golden.trim_end());
}

#[test]
fn antidiagonal_listing() {
    let o = fibauto(&["diag", "5"]);
    assert_eq!(stdout(&o), "0 5 5\n1 4 4\n2 3 2\n3 2 2\n4 1 1\n5 0 0\n");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fibauto(&["seq", "zz", "5"]).status.code(), Some(2));
    assert_eq!(fibauto(&["--format", "dot", "seq", "t", "5"]).status.code(), Some(2));
    assert_eq!(fibauto(&["bogus"]).status.code(), Some(2));
    assert_eq!(fibauto(&["run", "/nonexistent/script.walnut"]).status.code(), Some(2));
}

#[test]
fn scripts_report_and_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.walnut");
    fs::write(&empty, "# nothing here\n").unwrap();
    let o = fibauto(&["run", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let good = dir.path().join("good.walnut");
    fs::write(&good, "def even \"?msd_fib Ek n=2*k\":\neval e4 \"?msd_fib $even(4)\":\n").unwrap();
    let o = fibauto(&["run", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("eval e4: TRUE"));

    let bad = dir.path().join("bad.walnut");
    fs::write(&bad, "eval nope \"?msd_fib En n+1=n\":\n").unwrap();
    let o = fibauto(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("eval nope: FALSE"));

    let broken = dir.path().join("broken.walnut");
    fs::write(&broken, "eval x \"?msd_lsd Ax x=x\":\n").unwrap();
    let o = fibauto(&["run", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("msd_lsd"));
}

#[test]
fn store_persists_between_runs() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store");
    let script = dir.path().join("def.walnut");
    fs::write(&script, "def triple \"?msd_fib y=3*x\":\n").unwrap();
    let store_arg = store.to_str().unwrap();
    assert_eq!(fibauto(&["--store", store_arg, "run", script.to_str().unwrap()]).status.code(), Some(0));

    let o = fibauto(&["--store", store_arg, "export", "triple", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("arity 2\n"));

    let out = dir.path().join("triple.dot");
    let o = fibauto(&["--store", store_arg, "export", "triple", "dot", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().starts_with("digraph \"triple\""));

    assert_eq!(fibauto(&["--store", store_arg, "export", "missing", "text"]).status.code(), Some(2));
}

#[test]
fn guess_even() {
    let o = fibauto(&["guess", "even"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("stabilized true"));
}
