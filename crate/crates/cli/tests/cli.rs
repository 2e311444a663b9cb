use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("outerlip-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn outerlip(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_outerlip")).args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = outerlip(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn distance_matches_the_worked_examples() {
    let back = stdout_of(&["distance", &path("example1_x10.txt"), &path("example1_x2.txt")]);
    assert!(back.starts_with("stretch 5\n"), "{back}");
    let fwd = stdout_of(&["distance", &path("example3_x0.txt"), &path("example3_xt.txt")]);
    assert!(fwd.starts_with("stretch 5\n"), "{fwd}");
    let rev = stdout_of(&["distance", &path("example3_xt.txt"), &path("example3_x0.txt")]);
    assert!(rev.starts_with("stretch 19/15\n"), "{rev}");
    let barbell = stdout_of(&["distance", &path("example2_barbell.txt"), &path("example2_rose.txt")]);
    assert!(barbell.starts_with("stretch 19\n"), "{barbell}");
}

#[test]
fn norms_and_potential() {
    let n = stdout_of(&["norm", &path("example1_x2.txt"), &path("rose2_tau.txt")]);
    assert!(n.starts_with("lipschitz 1/2 "), "{n}");
    for conv in ["max", "min"] {
        let t = stdout_of(&["nnorm", &path("example1_x10.txt"), &path("rose2_tau.txt"), "--convention", conv]);
        assert_eq!(t.lines().count(), 3, "{t}");
    }
    let p = stdout_of(&["psi", &path("example1_x10.txt"), "--terms"]);
    assert!(p.contains("terms 21 (K = 21)"), "{p}");
    assert_eq!(p.lines().count(), 3 + 21);
}

#[test]
fn candidates_and_covers() {
    let c = stdout_of(&["candidates", &path("example2_barbell.txt")]);
    assert_eq!(c.lines().count(), 4, "{c}");
    assert_eq!(c.lines().filter(|l| l.starts_with("barbell")).count(), 2);
    let cov = stdout_of(&["covers", &path("example1_x2.txt")]);
    assert_eq!(cov.lines().filter(|l| l.starts_with("cover")).count(), 3);
}

#[test]
fn orbit_path_identity_is_exact() {
    let out = stdout_of(&["pathlen", &path("orbit_path.txt")]);
    assert!(out.contains("exact true"), "{out}");
    assert!(out.contains("residual 0e0"), "{out}");
}

#[test]
fn sampled_pairs_can_be_read_back() {
    let dir = scratch("sample");
    stdout_of(&["sample", "--rank", "3", "--moves", "4", "--seed", "9", "--out-dir", dir.to_str().unwrap()]);
    let x = dir.join("x.txt");
    let y = dir.join("y.txt");
    let d = stdout_of(&["distance", x.to_str().unwrap(), y.to_str().unwrap()]);
    assert!(d.lines().any(|l| l.starts_with("distance ")));
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_writes_csv() {
    let dir = scratch("verify");
    let csv = dir.join("rows.csv");
    let out = stdout_of(&["verify", "--suite", "examples", "--suite", "hm", "--csv", csv.to_str().unwrap()]);
    assert!(out.contains("[PASS] suite examples (19 checks)"), "{out}");
    assert!(out.ends_with("all checks passed\n"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("scenario,rank,seed,lhs,rhs,margin,witness\n"));
    assert!(text.lines().count() > 19 + 1);
    fs::remove_dir_all(dir).unwrap();
}

#[test]
fn small_verify_run_passes() {
    let out = stdout_of(&["verify", "--suite", "paths", "--suite", "main", "--rank", "2", "--samples", "8", "--seed", "3"]);
    assert!(out.ends_with("all checks passed\n"), "{out}");
}

#[test]
fn errors_exit_with_status_two() {
    let dir = scratch("errors");
    let bad = dir.join("bad.txt");
    fs::write(&bad, "vertices o\nedge a o o 1/2\nedge b o o\n").unwrap();
    let out = outerlip(&["psi", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert_eq!(outerlip(&["verify", "--rank", "7"]).status.code(), Some(2));
    assert_eq!(outerlip(&["distance", "/nonexistent/x", "/nonexistent/y"]).status.code(), Some(2));
    fs::remove_dir_all(dir).unwrap();
}
