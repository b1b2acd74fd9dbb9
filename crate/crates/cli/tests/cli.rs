use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_opplus");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn out(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/equipartite-a3-k10-l5.cert")
}

#[test]
fn solve_exit_codes() {
    let o = run(&["solve", "--n", "22", "--m", "11"]);
    assert_eq!(code(&o), 0);
    assert_eq!(out(&o).lines().filter(|l| l.starts_with("FACTOR")).count(), 11);
    assert_eq!(code(&run(&["solve", "--n", "20", "--m", "5"])), 3);
    assert_eq!(code(&run(&["solve", "--n", "12", "--m", "5"])), 2);
    assert_eq!(code(&run(&["solve", "--n", "18", "--m", "3"])), 3);
    assert_eq!(code(&run(&["solve", "--n", "10", "--lengths", "3,7"])), 3);
    let o = run(&["solve", "--n", "30", "--m", "5", "--max-seconds", "0"]);
    assert_eq!(code(&o), 4, "{}", out(&o));
}

#[test]
fn usage_errors() {
    assert_eq!(code(&run(&["solve", "--n", "ten", "--m", "5"])), 64);
    assert_eq!(code(&run(&["solve", "--n", "10", "--m", "5", "--lengths", "5,5"])), 64);
    assert_eq!(code(&run(&["solve", "--n", "11", "--m", "5"])), 64);
    assert_eq!(code(&run(&["obstruct", "--m", "4"])), 64);
    assert_eq!(code(&run(&["search", "--variant", "opplus", "--n", "10", "--m", "5", "--mode", "exhaustive"])), 64);
    assert_eq!(code(&run(&["bogus"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn verify_reports_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cert");
    let p = path.to_str().unwrap();
    assert_eq!(code(&run(&["solve", "--n", "10", "--m", "5", "--out", p])), 0);
    assert_eq!(code(&run(&["verify", p])), 0);
    assert_eq!(code(&run(&["verify", p, "--spec", "n=10,m=5"])), 0);
    assert_eq!(code(&run(&["verify", p, "--spec", "n=10,lengths=4/6"])), 1);
    let text = fs::read_to_string(&path).unwrap();
    // swap factor 0 for two 5-cycles it does not use
    let line = text.lines().find(|l| l.starts_with("FACTOR 0:")).unwrap();
    let tampered = text.replace(line, "FACTOR 0: (0 1 2 3 4) (5 6 7 8 9)");
    fs::write(&path, tampered).unwrap();
    let o = run(&["verify", p]);
    assert_eq!(code(&o), 1);
    assert!(out(&o).contains("EdgeMultiplicity"), "{}", out(&o));
}

#[test]
fn malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cert");
    fs::write(&path, "OPCERT v1 KN_PLUS_I n=4\nDUP 0-1 2-3\nFACTOR 0: (0 1 2 2)\n").unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 65);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(code(&run(&["verify", dir.path().join("missing.cert").to_str().unwrap()])), 74);
}

#[test]
fn search_outcomes() {
    let o = run(&["search", "--variant", "opplus", "--n", "6", "--m", "3", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 2);
    let o = run(&["search", "--variant", "opminus", "--n", "6", "--lengths", "6", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 0);
    assert!(out(&o).starts_with("OPCERT v1 KN_MINUS_I n=6\nMISSING 0-1 2-3 4-5\n"));
    let o = run(&["search", "--variant", "opminus", "--n", "6", "--lengths", "3,3", "--mode", "exhaustive"]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "search", "--variant", "opminus", "--n", "8", "--lengths", "4,4", "--matching", "0-7,1-2,3-5,4-6",
    ]);
    assert_eq!(code(&o), 0);
    assert!(out(&o).contains("MISSING 0-7 1-2 3-5 4-6"));
    let o = run(&["search", "--variant", "equipartite", "--alpha", "2", "--k", "4", "--m", "4"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn equipartite_cache_and_import() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let c = cache.to_str().unwrap();
    let o = run(&["equipartite", "--alpha", "3", "--k", "2", "--ell", "3"]);
    assert_eq!(code(&o), 2);
    assert!(out(&o).contains("exceptional"));
    let o = run(&["equipartite", "--alpha", "2", "--k", "4", "--ell", "4", "--search", "--cache-dir", c]);
    assert_eq!(code(&o), 0);
    let cached = cache.join("equipartite-a2-k4-l4.cert");
    assert!(cached.exists());
    fs::write(&cached, "OPCERT v1 EQUIPARTITE a=2 k=4 n=8\nFACTOR 0: (0 4 1 5)\n").unwrap();
    let o = run(&["equipartite", "--alpha", "2", "--k", "4", "--ell", "4", "--search", "--cache-dir", c]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("evicted"));

    let f = fixture();
    let o = run(&["equipartite", "--alpha", "3", "--k", "10", "--ell", "5", "--import", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let o = run(&["equipartite", "--alpha", "3", "--k", "10", "--ell", "4", "--import", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let o = run(&["equipartite", "--alpha", "2", "--k", "10", "--ell", "4", "--import", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
}

#[test]
fn solve_with_provider_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n30.cert");
    let o = run(&[
        "solve", "--n", "30", "--m", "5", "--max-seconds", "0",
        "--provider-cert", fixture().to_str().unwrap(), "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", out(&o));
    assert_eq!(code(&run(&["verify", path.to_str().unwrap(), "--spec", "n=30,m=5"])), 0);
}
