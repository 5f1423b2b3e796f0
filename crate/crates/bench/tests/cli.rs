use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rsfd-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run_small(out: &Path, workers: &str) -> Output {
    bench(&[
        "run",
        "--synthetic",
        "3000,3,4x3",
        "--eps",
        "ln2..ln4",
        "--runs",
        "3",
        "--seed",
        "42",
        "--workers",
        workers,
        "--no-timing",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn run_writes_the_results_contract() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = run_small(&out, "1");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("dataset,solution,epsilon,run,mse_avg,wall_time_s,seed"));
    assert_eq!(lines.clone().count(), 6 * 3 * 3);
    assert_eq!(
        lines.next().unwrap().split(',').take(4).collect::<Vec<_>>(),
        ["synthetic-n3000-d3", "spl-adp", "0.693147181", "0"]
    );
}

#[test]
fn worker_count_gives_byte_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(run_small(&a, "1").status.code(), Some(0));
    assert_eq!(run_small(&b, "4").status.code(), Some(0));
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn summarize_aggregates_per_group() {
    let dir = tempfile::tempdir().unwrap();
    let (r, s) = (dir.path().join("r.csv"), dir.path().join("s.csv"));
    assert_eq!(run_small(&r, "0").status.code(), Some(0));
    let o = bench(&["summarize", "--in", r.to_str().unwrap(), "--out", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&s).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "dataset,solution,epsilon,mse_mean,mse_std,runs");
    assert_eq!(rows.len(), 1 + 6 * 3);
    assert!(rows[1..].iter().all(|r| r.ends_with(",3")));
}

#[test]
fn audit_prints_golden_ratios() {
    let o = bench(&["audit", "--protocol", "rsfd-grr", "--d", "2", "--k", "2,2", "--eps", "0.693147"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("one-attribute max ratio: 1.99999"), "{out}");
    assert!(out.contains("any-pair max ratio: 2.99999"), "{out}");

    let o = bench(&["audit", "--protocol", "rsfd-grr", "--d", "2", "--k", "2", "--eps", "ln2", "--neighboring", "any"]);
    let out = stdout(&o);
    assert!(out.contains("any-pair max ratio: 3.000000000"), "{out}");
    assert!(!out.contains("one-attribute"));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = bench(&["run", "--synthetic", "100,2,2x2", "--eps", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("privacy budget"), "{}", stderr(&o));

    for args in [
        &["run", "--synthetic", "100,2,2x2", "--solutions", "olh"][..],
        &["run", "--synthetic", "100,2,2x3"],
        &["run", "--synthetic", "100,2,2x2", "--runs", "0"],
        &["run", "--eps", "ln2"],
        &["run", "--synthetic", "100,2,2", "--bogus"],
        &["audit", "--protocol", "rsfd-grr", "--d", "2", "--k", "2,2,2", "--eps", "1"],
        &["audit", "--protocol", "rsfd-oue-z", "--d", "3", "--k", "12", "--eps", "1"],
        &["frobnicate"],
    ] {
        assert_eq!(bench(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let o = bench(&["run", "--dataset", missing.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not found"));

    let constant = dir.path().join("c.csv");
    std::fs::write(&constant, "a,b\nx,1\ny,1\n").unwrap();
    let o = bench(&["run", "--dataset", constant.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));

    let o = bench(&["summarize", "--in", missing.to_str().unwrap(), "--out", "/dev/null"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_dataset_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("toy.csv");
    let mut text = String::from("color,size,extra\n");
    for i in 0..600 {
        text.push_str(&format!("{},{},{}\n", ["red", "green", "blue"][i % 3], ["S", "L"][i % 2], i % 5));
    }
    text.push_str("?,S,1\n");
    std::fs::write(&data, text).unwrap();
    let out = dir.path().join("r.csv");
    let o = bench(&[
        "run",
        "--dataset",
        data.to_str().unwrap(),
        "--columns",
        "color,size",
        "--solutions",
        "rsfd-adp,smp-adp",
        "--eps",
        "1,2",
        "--runs",
        "2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 2);
    assert!(text.lines().nth(1).unwrap().starts_with("toy,smp-adp,1.00000000,0,"));
}
