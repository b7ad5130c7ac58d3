use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abductor"))
        .args(args)
        .env_remove("ABD_SEED")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn example() -> String {
    data("worked.abd").display().to_string()
}

#[test]
fn solve_exit_codes() {
    let o = run(&["solve", &example(), "--algo", "pabd-enum", "--mode", "pabd"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["witness"], serde_json::json!([1, 4]));

    let dir = tempfile::tempdir().unwrap();
    let no = dir.path().join("no.abd");
    std::fs::write(
        &no,
        "abd 1\nvars 2\nrel IMP 2 00;10;11\ncon IMP 1 2\nhyp 1\nman 2\n",
    )
    .unwrap();
    let o = run(&["solve", no.to_str().unwrap(), "--algo", "baseline"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["answer"], false);

    let o = run(&["solve", &example(), "--algo", "simplesat"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["error"].as_str().unwrap().contains("fragment"));
    assert!(json(&o).get("answer").is_none());

    let o = run(&["solve", &example(), "--algo", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["solve", "/nonexistent.abd"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn solve_output_matches_golden_file() {
    let o = run(&["solve", &example(), "--algo", "oracle", "--mode", "abd"]);
    let mut got = json(&o);
    got["stats"]["wall_ms"] = serde_json::json!(0.0);
    let want: Value = serde_json::from_str(
        &std::fs::read_to_string(data("golden/worked-oracle-abd.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(got, want);
}

#[test]
fn gen_is_deterministic_and_honours_the_env_seed() {
    let a = run(&["gen", "--family", "xsat", "-n", "10", "--seed", "7"]);
    let b = run(&["gen", "--family", "xsat", "-n", "10", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_abductor"))
        .args(["gen", "--family", "xsat", "-n", "10"])
        .env("ABD_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("abd 1\n"));
}

#[test]
fn gen_then_solve() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("g.abd");
    let o = run(&[
        "gen",
        "--family",
        "kcnf-pos",
        "-n",
        "8",
        "-o",
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let a = run(&["solve", f.to_str().unwrap(), "--algo", "simplesat"]);
    let b = run(&["solve", f.to_str().unwrap(), "--algo", "oracle"]);
    assert_eq!(json(&a)["answer"], json(&b)["answer"]);
}

#[test]
fn reduce_writes_instance_and_report() {
    let o = run(&["reduce", &example(), "--reduction", "abd-to-pabd-4cnf"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("abd 1\n"));
    let report: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(report["added_vars"], 3);
    assert_eq!(report["contract"]["kind"], "lv");

    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("two.abd");
    std::fs::write(
        &f,
        "vars 3\nrel OR 2 10;01;11\ncon OR 1 3\ncon OR 2 3\nhyp 1 2\nman 3\n",
    )
    .unwrap();
    let o = run(&[
        "reduce",
        f.to_str().unwrap(),
        "--reduction",
        "abd2cnf-to-cnfsat",
    ]);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("p cnf 3 1\n"));

    let o = run(&["reduce", &example(), "--reduction", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

fn verify(args: &[&str], dump: &Path) -> Output {
    let mut a = vec!["verify", "--dump-dir", dump.to_str().unwrap()];
    a.extend_from_slice(args);
    run(&a)
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = verify(&["--per-family", "3", "--max-n", "6"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["failed"], 0);

    let o = verify(
        &["--per-family", "3", "--max-n", "6", "--inject-bug"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let dumped = json(&o)["dumped"].as_array().unwrap().clone();
    assert!(!dumped.is_empty());
    let first = dumped[0].as_str().unwrap();
    assert!(std::fs::read_to_string(first).unwrap().contains("abd 1"));

    let o = verify(&["--per-family", "0"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_fits_a_base() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("b.csv");
    let o = run(&[
        "bench",
        "--family",
        "xsat-chain",
        "--algo",
        "sparse",
        "--grid",
        "4..12:2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(json(&o)["base"].as_f64().unwrap() > 1.0);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 6);
    let o = run(&[
        "bench", "--family", "xsat", "--algo", "sparse", "--grid", "4..6",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
