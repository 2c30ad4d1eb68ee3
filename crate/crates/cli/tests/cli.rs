use std::process::{Command, Output};

fn kcharge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kcharge")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn todd_genus_of_cp3() {
    let o = kcharge(&["--eval", "print integrate(td(T(CP(3))));"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1\n");
}

#[test]
fn missing_script_is_a_usage_error() {
    let o = kcharge(&["--script", "missing.ks"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing.ks"));
}

#[test]
fn failed_assert_shows_both_sides() {
    let o = kcharge(&["--eval", "assert ch(eps(2)) == ch(eps(3));"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("`2`") && err.contains("`3`"), "{err}");
    assert!(err.contains("1:1"), "{err}");
}

#[test]
fn parse_error_goes_to_stderr() {
    let o = kcharge(&["--eval", "print td("]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).contains("unexpected end of input"));
}

#[test]
fn json_format() {
    let o = kcharge(&["--format", "json", "--eval", "space X = S(3); print kgroup(X, 0);"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"index\":2,\"kind\":\"group\",\"value\":\"Z\"}\n");
}

#[test]
fn degree_cap_truncates() {
    let src = "space X = CP(3); bundle L on X = O(1); print ch(L);";
    let full = stdout(&kcharge(&["--eval", src]));
    let capped = stdout(&kcharge(&["--degree-cap", "1", "--eval", src]));
    assert_eq!(full, "1 + x + 1/2*x^2 + 1/6*x^3\n");
    assert_eq!(capped, "1 + x\n");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kcharge(&[]).status.code(), Some(2));
    assert_eq!(kcharge(&["--eval", "x", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(kcharge(&["--version"]).status.code(), Some(0));
}
