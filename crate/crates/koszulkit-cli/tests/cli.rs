use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.kz"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszulkit")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("koszulkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn koszul_both_methods_agree_on_sym2() {
    let o = run(&["koszul", &fixture("sym2"), "--degree", "6", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: KOSZUL up to 6; methods agree"));
}

#[test]
fn non_koszul_exits_with_verdict_code() {
    let o = run(&["koszul", &fixture("non_koszul"), "--degree", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("NOT KOSZUL"));
}

#[test]
fn pbw_weyl_table() {
    let o = run(&["pbw", &fixture("weyl1"), "--degree", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("filtered dims: 1 3 6 10 15 21 28"));
}

#[test]
fn fake_jacobi_fails_equation_j() {
    let o = run(&["nonhomog-check", &fixture("fake_jacobi")]);
    assert_eq!(o.status.code(), Some(2));
    let s = stdout(&o);
    assert!(s.contains("(j) FAILS"), "{s}");
    assert!(s.contains("witness"));
}

#[test]
fn dualize_writes_a_loadable_document() {
    let out = temp("sym3_dual.kz");
    let o = run(&["dualize", &fixture("sym3"), "--degree", "4", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dims of the dual: 1 3 3 1 0"));
    let o = run(&["check-quadratic", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn cdg_dual_output_feeds_pbw() {
    let out = temp("sl2_cdg.kz");
    let o = run(&["cdg-dual", &fixture("sl2"), "--degree", "3", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["pbw", out.to_str().unwrap(), "--degree", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("filtered dims: 1 4 10 20 35"));
}

#[test]
fn complexes_tables() {
    let o = run(&["complexes", &fixture("sl2"), "--which", "nonhomog", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dg cohomology: 1 0 0 1"));
    let o = run(&["complexes", &fixture("sym2"), "--which", "second", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["complexes", &fixture("weyl1"), "--which", "resolution", "--budget", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: exact through 3"));
}

#[test]
fn frobenius_and_convert() {
    let o = run(&["frobenius", &fixture("sym2"), "--top", "2"]);
    assert_eq!(o.status.code(), Some(2), "Sym is not Frobenius");
    let o = run(&["frobenius", &fixture("weyl1"), "--top", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["convert", &fixture("nonabelian2"), "--budget", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn user_errors_exit_with_one() {
    assert_eq!(run(&["koszul", "/no/such/file.kz", "--degree", "2"]).status.code(), Some(1));
    let bad = temp("bad.kz");
    std::fs::write(&bad, "{\"format_version\": 7}").unwrap();
    let o = run(&["koszul", bad.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("format_version"));
    let o = run(&["--field", "fp:6", "koszul", &fixture("sym2"), "--degree", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn field_override_reads_over_another_field() {
    let o = run(&["--field", "fp:3", "koszul", &fixture("sym2"), "--degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("field: fp:3"));
}

#[test]
fn json_is_stable_across_threads() {
    let a = run(&["--json", "fuzz", "--seed", "3", "--count", "12", "--threads", "1"]);
    let b = run(&["--json", "fuzz", "--seed", "3", "--count", "12", "--threads", "4"]);
    let c = std::process::Command::new(env!("CARGO_BIN_EXE_koszulkit"))
        .args(["--json", "fuzz", "--seed", "3", "--count", "12"])
        .env("KOSZULKIT_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["certified"], true);
}
