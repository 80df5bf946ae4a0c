use std::path::Path;
use std::process::{Command, Output};

fn stabledg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stabledg")).args(args).env_remove("STABLE_DG_SEED").output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_run_summarize_verify() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("tight.jsonl");
    let trace = dir.path().join("tight.csv");

    let o = stabledg(&["gen", "tight", "-d", "3", "--out", s(&stream)]);
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("tight.jsonl.sidecar.json").exists());

    let o = stabledg(&[
        "run",
        "--alg",
        "directed",
        "--stream",
        s(&stream),
        "-o",
        s(&trace),
        "--oracle",
        "exact",
        "--oracle-max-vertices",
        "40",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("final size: 11"), "{}", stdout(&o));
    assert!(dir.path().join("tight.csv.meta.json").exists());

    let o = stabledg(&["summarize", s(&trace)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("directed"));

    let o = stabledg(&["verify", s(&trace)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains(" 0 violations"), "{}", stdout(&o));
}

#[test]
fn insertion_only_rejects_departures() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("dyn.jsonl");
    assert!(stabledg(&["gen", "dynamic", "-n", "60", "--out", s(&stream)]).status.success());

    let o = stabledg(&["run", "--alg", "is2", "--stream", s(&stream)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("fully-dynamic"));

    let o = stabledg(&["run", "--alg", "is6", "--stream", s(&stream), "--strict"]);
    assert!(o.status.success(), "{o:?}");
}

#[test]
fn empty_stream_gives_empty_trace() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("empty.jsonl");
    let trace = dir.path().join("empty.csv");
    std::fs::write(&stream, "").unwrap();

    let o = stabledg(&["run", "--alg", "phase2", "--stream", s(&stream), "-o", s(&trace)]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("empty trace"));
    let o = stabledg(&["summarize", s(&trace)]);
    assert!(!o.status.success());
}

#[test]
fn seed_env_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let c = dir.path().join("c.jsonl");
    assert!(stabledg(&["gen", "sparse", "--seed", "5", "--out", s(&a)]).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_stabledg"))
        .args(["gen", "sparse", "--out", s(&b)])
        .env("STABLE_DG_SEED", "5")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(stabledg(&["gen", "sparse", "--seed", "6", "--out", s(&c)]).status.success());

    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
}

#[test]
fn sas_on_path_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("path.jsonl");
    let trace = dir.path().join("path.csv");
    assert!(stabledg(&["gen", "path", "-n", "12", "--out", s(&stream)]).status.success());
    let o = stabledg(&[
        "run",
        "--alg",
        "sas",
        "--sense",
        "max-is",
        "--eps",
        "1/2",
        "--f",
        "2",
        "--stream",
        s(&stream),
        "-o",
        s(&trace),
        "--oracle",
        "exact",
    ]);
    assert!(o.status.success(), "{o:?}");
    assert!(stabledg(&["verify", s(&trace)]).status.success());
}

#[test]
fn bad_epsilon_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let stream = dir.path().join("p.jsonl");
    assert!(stabledg(&["gen", "path", "-n", "4", "--out", s(&stream)]).status.success());
    let o = stabledg(&["run", "--alg", "sas", "--eps", "zero", "--stream", s(&stream)]);
    assert_eq!(o.status.code(), Some(1));
}
