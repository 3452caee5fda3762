use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = dir.path().join(name);
    let path = path.to_str().unwrap();
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path]);
    assert_eq!(code(&rop(&full)), 0);
    path.to_owned()
}

#[test]
fn check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let q4 = gen(&dir, "q4.txt", &["qn", "--n", "4", "--p", "1009"]);
    assert_eq!(code(&rop(&["check", &q4])), 1);

    let rof = gen(&dir, "rof.txt", &["rof", "--n", "6", "--seed", "11"]);
    let out = rop(&["check", &rof]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("verdict: ROP"));

    let bad = write(&dir, "bad.txt", "field p=101 n=2\nx1 + + x3\n");
    assert_eq!(code(&rop(&["check", &bad])), 2);
    assert_eq!(code(&rop(&["check", "/nonexistent/file"])), 2);
    assert_eq!(code(&rop(&["check", &q4, "--p", "101"])), 2);
    assert_eq!(code(&rop(&["check", &q4, "--frobnicate"])), 2);

    let square = write(&dir, "sq.txt", "field p=101 n=3\nx1^2*x2 + x3\n");
    assert_eq!(code(&rop(&["check", &square])), 3);
}

#[test]
fn check_warns_on_small_field_and_can_be_indeterminate() {
    let dir = TempDir::new().unwrap();
    // over GF(2) the x1*x2 coefficient vanishes at half the points, and the
    // product of all multiplicands at every point
    let p = write(&dir, "p.txt", "field p=2 n=3\nx1*x2 + x1*x3 + x2*x3\n");
    let out = rop(&["check", &p, "--json"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert_eq!(code(&out), 4);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "INDETERMINATE");
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn check_json_shape() {
    let dir = TempDir::new().unwrap();
    let q5 = gen(&dir, "q5.txt", &["qn", "--n", "5", "--p", "1009"]);
    let out = rop(&["check", &q5, "--json", "--seed", "4"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "READ_MANY");
    assert_eq!(v["p"], 1009);
    assert_eq!(v["seed"], 4);
    let witness: Vec<u64> = v["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(witness.len(), 3);
    assert!(witness.iter().all(|&t| (1..=5).contains(&t)));
    assert_eq!(v["assignment"].as_array().unwrap().len(), 5);
}

#[test]
fn blackbox_reports_round_trip() {
    let dir = TempDir::new().unwrap();
    let rof = gen(&dir, "rof.txt", &["rof", "--n", "5", "--seed", "2"]);
    let out = rop(&["blackbox", &rof, "--json", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut keys = keys;
    keys.sort();
    assert_eq!(
        keys,
        [
            "failing_I",
            "failure_kind",
            "queries",
            "repeats",
            "seed",
            "verdict"
        ]
    );
    let report: readonce::testers::TestReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(serde_json::to_value(&report).unwrap(), v);
    assert_eq!(report.seed, 9);

    let q5 = gen(&dir, "q5.txt", &["qn", "--n", "5", "--p", "1009"]);
    let out = rop(&["blackbox", &q5, "--json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["verdict"], "NO");
    assert_eq!(v["failure_kind"], "NOT_ROP");
    let labels = v["failing_I"].as_array().unwrap();
    assert!(labels.iter().all(|x| x.as_u64().unwrap() >= 1));
}

#[test]
fn blackbox_batch_rate_on_q6() {
    let dir = TempDir::new().unwrap();
    let q6 = gen(&dir, "q6.txt", &["qn", "--n", "6", "--p", "11677"]);
    let out = rop(&[
        "blackbox",
        &q6,
        "--epsilon",
        "0.25",
        "--degree",
        "6",
        "--repeat",
        "200",
        "--json",
    ]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["runs"], 200);
    assert!(v["rejection_rate"].as_f64().unwrap() >= 0.70);
    assert_eq!(v["reports"].as_array().unwrap().len(), 200);
}

#[test]
fn blackbox_small_field_warns_and_runs() {
    let dir = TempDir::new().unwrap();
    let rof = gen(
        &dir,
        "rof.txt",
        &["rof", "--n", "4", "--p", "11", "--seed", "1"],
    );
    let out = rop(&["blackbox", &rof]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    // d = n = 4 needs 5 distinct nodes; GF(3) has too few
    let tiny = gen(
        &dir,
        "tiny.txt",
        &["rof", "--n", "4", "--p", "3", "--seed", "1"],
    );
    assert_eq!(code(&rop(&["blackbox", &tiny])), 3);
    assert_eq!(code(&rop(&["blackbox", &rof, "--degree", "0"])), 3);
    assert_eq!(code(&rop(&["blackbox", &rof, "--epsilon", "0"])), 2);
}

#[test]
fn property_command() {
    let dir = TempDir::new().unwrap();
    let rof = gen(&dir, "rof.txt", &["rof", "--n", "5", "--seed", "5"]);
    let out = rop(&["property", &rof, "--delta", "0.25", "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    // ceil(3 / (0.25 + 5^-4))
    assert_eq!(v["repeats"], 12);

    let sq = write(&dir, "sq.txt", "field p=101 n=3\nx1^2 + x2*x3\n");
    let out = rop(&["property", &sq, "--json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["failure_kind"], "NOT_MULTILINEAR");

    let out = rop(&[
        "property",
        &rof,
        "--corrupt",
        "0.4",
        "--repeat",
        "20",
        "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["rejection_rate"].as_f64().unwrap() >= 0.8);

    let gf2 = write(&dir, "gf2.txt", "field p=2 n=3\nx1 + x2\n");
    assert_eq!(code(&rop(&["property", &gf2])), 3);
}

#[test]
fn gen_round_trips_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.txt", &["rof", "--n", "8", "--seed", "7"]);
    let b = gen(&dir, "b.txt", &["rof", "--n", "8", "--seed", "7"]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let phi = readonce::rof::Rof::parse(&fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(phi.arity(), 8);

    let q = gen(&dir, "q.txt", &["qn", "--n", "5", "--p", "101"]);
    let parsed = readonce::MPoly::parse(&fs::read_to_string(&q).unwrap()).unwrap();
    let f = readonce::FieldCtx::new(101).unwrap();
    assert_eq!(parsed, readonce::hardcases::q_n(5, f));

    let m = gen(
        &dir,
        "m.txt",
        &["random-multilinear", "--n", "4", "--seed", "3"],
    );
    let parsed = readonce::MPoly::parse(&fs::read_to_string(&m).unwrap()).unwrap();
    assert!(parsed.is_multilinear());
    assert_eq!(parsed.arity(), 4);

    let out = rop(&["gen", "rof", "--n", "3", "--vars", "4"]);
    assert_eq!(code(&out), 2);
    let out = rop(&["gen", "qn", "--n", "3", "--p", "100"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn same_command_same_bytes() {
    let dir = TempDir::new().unwrap();
    let m = gen(
        &dir,
        "m.txt",
        &["random-multilinear", "--n", "5", "--seed", "8"],
    );
    for args in [
        vec!["check", m.as_str(), "--json", "--seed", "3"],
        vec!["blackbox", m.as_str(), "--json", "--seed", "3"],
        vec![
            "property",
            m.as_str(),
            "--json",
            "--seed",
            "3",
            "--repeat",
            "5",
        ],
        vec![
            "experiment",
            "tau",
            "--input",
            m.as_str(),
            "--samples",
            "500",
            "--seed",
            "3",
        ],
        vec![
            "experiment",
            "qn-fraction",
            "--p",
            "11",
            "--n",
            "4",
            "--samples",
            "300",
            "--seed",
            "3",
        ],
    ] {
        let first = rop(&args);
        let again = rop(&args);
        assert_eq!(first.stdout, again.stdout, "{args:?}");
        assert_eq!(code(&first), code(&again));
    }
    // the thread count does not change results
    let one = rop(&[
        "--threads",
        "1",
        "experiment",
        "qn-fraction",
        "--p",
        "5",
        "--n",
        "4",
        "--n-max",
        "6",
    ]);
    let four = rop(&[
        "--threads",
        "4",
        "experiment",
        "qn-fraction",
        "--p",
        "5",
        "--n",
        "4",
        "--n-max",
        "6",
    ]);
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn experiments() {
    let out = rop(&["experiment", "qn-fraction", "--p", "2", "--n", "4"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "p,n,samples,good_fraction,stderr\n2,4,16,1.0,0.0\n"
    );

    let out = rop(&["experiment", "trivariate-enum", "--p", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "6561 cases, 0 disagreements\n");
    assert_eq!(
        code(&rop(&["experiment", "trivariate-enum", "--p", "11"])),
        3
    );
    assert_eq!(
        code(&rop(&[
            "experiment",
            "qn-fraction",
            "--p",
            "5",
            "--n",
            "40"
        ])),
        3
    );
    assert_eq!(code(&rop(&["experiment", "qn-fraction", "--p", "5"])), 2);

    let dir = TempDir::new().unwrap();
    let m = gen(
        &dir,
        "m.txt",
        &["random-multilinear", "--n", "4", "--seed", "1"],
    );
    let out = rop(&[
        "experiment",
        "tau",
        "--input",
        &m,
        "--samples",
        "400",
        "--json",
    ]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["fraction"], 0.0);
    assert_eq!(v["samples"], 400);

    let sq = write(&dir, "sq.txt", "field p=101 n=2\nx1^2 + x2\n");
    let out = rop(&[
        "experiment",
        "tau",
        "--input",
        &sq,
        "--samples",
        "400",
        "--axis",
        "1",
    ]);
    let csv = stdout(&out);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[..4], ["101", "2", "1", "400"]);
    assert_eq!(row[4], "1.0");

    let csv_path = dir.path().join("sweep.csv");
    let out = rop(&[
        "experiment",
        "qn-fraction",
        "--p",
        "3",
        "--n",
        "4",
        "--n-max",
        "5",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let mut reader = csv::Reader::from_path(Path::new(&csv_path)).unwrap();
    let rows: Vec<readonce::hardcases::SweepRow> =
        reader.deserialize().collect::<Result<_, _>>().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].samples, 81);
    assert_eq!(rows[1].n, 5);
}
