use std::net::TcpListener;
use std::path::Path;
use std::process::{Command, Output};
use std::sync::Arc;
use std::thread;

use hsslab::cmd::pir::{load_served, remote_answers, serve};
use serde_json::Value;

fn hsslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hsslab")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hsslab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

#[test]
fn sw_rates_matches_golden() {
    let got = stdout(&["sw", "rates", "--scheme", "greedy", "--t", "1", "--k", "3", "--d", "2", "--field", "2", "--no-timing"]);
    assert_eq!(got, golden("sw_rates_greedy.csv"));
    let rows: Vec<&str> = got.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 7);
}

#[test]
fn shamir_search_matches_golden() {
    assert_eq!(stdout(&["audit", "shamir-search", "--no-timing"]), golden("shamir_search.json"));
    let alt = json(&["audit", "shamir-search", "--basis", "1,3,7", "--no-timing"]);
    assert_eq!(alt["results"]["candidates"], 86016);
    assert_eq!(alt["results"]["witnesses"].as_array().unwrap().len(), 0);
    let timed = json(&["audit", "shamir-search"]);
    assert!(timed["results"]["duration_ms"].is_number());
}

#[test]
fn shamir_rates_row() {
    let csv = stdout(&["rates", "--family", "shamir", "--t", "1", "--d", "2", "--k", "5", "--field", "4", "--b", "1", "--no-timing"]);
    let row: Vec<&str> = csv.lines().last().unwrap().split(',').collect();
    assert_eq!(row[8], "3/5");
    assert_eq!(row[12], "exhaustive");
    let v = json(&["rates", "--family", "shamir", "--t", "1", "--d", "2", "--k", "5", "--field", "8", "--format", "json", "--checks", "none"]);
    assert_eq!(v["results"]["rate"], "3/5");
    assert_eq!(v["results"]["b"], 1);
}

#[test]
fn seeded_reports_are_byte_identical() {
    for args in [
        &["sw", "run", "--scheme", "greedy", "--t", "1", "--k", "3", "--d", "2", "--field", "2", "--trials", "40", "--seed", "7", "--no-timing"][..],
        &["rates", "--family", "cnf", "--t", "1", "--k", "3", "--d", "1", "--field", "2", "--transcript", "--seed", "7", "--format", "json", "--no-timing"],
        &["bb", "demo", "--transform", "packing", "--field", "5", "--m", "3", "--seed", "7", "--no-timing"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}

#[test]
fn transcript_reconstructs() {
    let v = json(&["rates", "--family", "cnf", "--t", "1", "--k", "5", "--d", "2", "--field", "8", "--poly", "3*x1*x2 + x1; x2^2; 5", "--transcript", "--format", "json", "--checks", "cert"]);
    let tr = &v["results"]["transcript"];
    assert_eq!(tr["reconstructed"], tr["expected"]);
    assert_eq!(tr["output_shares"].as_array().unwrap().len(), 5);
    assert!(v["runtime_ms"].is_number());
}

#[test]
fn exit_codes() {
    assert_eq!(hsslab(&["rates", "--family", "cnf", "--t", "2", "--k", "3", "--d", "2", "--field", "2"]).status.code(), Some(2));
    assert_eq!(hsslab(&["rates", "--family", "bogus", "--t", "1", "--k", "3", "--d", "1", "--field", "2"]).status.code(), Some(2));
    assert_eq!(hsslab(&["rates", "--t", "1", "--k", "3", "--d", "1", "--field", "6"]).status.code(), Some(2));
    assert_eq!(hsslab(&["shss", "audit", "--scheme", "greedy", "--t", "1", "--k", "5", "--d", "3", "--field", "5"]).status.code(), Some(3));
    assert_eq!(hsslab(&["audit", "shamir-search", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(hsslab(&["pir", "fetch", "--n", "10", "--index", "11", "--addr", "127.0.0.1:1"]).status.code(), Some(2));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "scheme = \"greedy\"\nt = 1\nk = 3\nd = 2\nfield = 3\n").unwrap();
    let cfgs = cfg.to_str().unwrap();
    let v = json(&["shss", "audit", "--config", cfgs, "--field", "2", "--no-timing"]);
    assert_eq!(v["params"]["field"], 2);
    assert_eq!(v["params"]["k"], 3);
    assert_eq!(v["results"]["verdict"], "PASS");
    let out = dir.path().join("r.json");
    stdout(&["shss", "audit", "--config", cfgs, "--out", out.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["params"]["field"], 3);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn verdicts_and_assignments() {
    let v = json(&["shss", "audit", "--scheme", "shamir", "--k", "3", "--d", "2", "--field", "5"]);
    assert_eq!(v["results"]["verdict"], "FAIL");
    assert!(v["results"]["witness"]["z"].is_array());
    let a = json(&["sw", "assignments"]);
    assert_eq!(a["results"]["assignments"], 512);
    assert_eq!(a["results"]["greedy_is_minimal"], true);
}

#[test]
fn bb_validate_reports_pass() {
    for k in ["2", "4", "6"] {
        let v = json(&["bb", "validate", "--transform", "two-server", "--k", k, "--field", "3"]);
        assert_eq!(v["results"]["pass"], true);
        assert_eq!(v["results"]["exhaustive"], true);
    }
}

#[test]
fn pir_over_loopback() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("db.json");
    let dbs = db.to_str().unwrap();
    stdout(&["pir", "gen-db", "--n", "25", "--db", dbs, "--seed", "4"]);
    let served = Arc::new(load_served(&db).unwrap());
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap().to_string();
    let s2 = served.clone();
    let server = thread::spawn(move || serve(listener, s2, Some(5 * 3)).unwrap());
    for j in [0usize, 11, 24] {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(j as u64);
        let (qs, st) = served.pir.query(j, &mut rng).unwrap();
        let ans = remote_answers(&served.pir, &addr, &qs).unwrap();
        assert_eq!(served.pir.reconstruct(&st, &ans).unwrap(), served.records[j]);
    }
    assert_eq!(server.join().unwrap(), (15, 15));

    // the binary: a serve process and a fetch process
    let mut child = Command::new(env!("CARGO_BIN_EXE_hsslab"))
        .args(["pir", "serve", "--db", dbs, "--addr", "127.0.0.1:0", "--requests", "5", "--no-timing"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    let mut err = std::io::BufReader::new(child.stderr.take().unwrap());
    let mut line = String::new();
    std::io::BufRead::read_line(&mut err, &mut line).unwrap();
    let addr = line.trim().strip_prefix("listening on ").expect("listening line").to_string();
    let v = json(&["pir", "fetch", "--db", dbs, "--index", "9", "--addr", &addr]);
    assert_eq!(v["results"]["verified"], true);
    assert_eq!(v["results"]["download_bits"], 15);
    assert!(child.wait().unwrap().success());
}
