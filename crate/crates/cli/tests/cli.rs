use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn galedim(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galedim"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const PARITY_FSG: &str = r#"{
  "states": ["even", "odd"],
  "initial_state": "even",
  "transition": {"even": ["even", "odd"], "odd": ["odd", "even"]},
  "accounts": [{"initial_capital": "1", "bets": {"even": ["3/4", "1/4"], "odd": ["1/2", "1/2"]}}]
}"#;

#[test]
fn validate_well_formed_fsg() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "g.json", PARITY_FSG);
    let out = galedim(dir.path(), &["validate", "g.json", "--depth", "10"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = json(&out);
    assert_eq!(report["outputs"]["passed"], true);
    assert_eq!(
        report["outputs"]["checks"]["induced_gale_s1"]["mode"],
        "exact"
    );
}

#[test]
fn validate_names_bad_account() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "g.json",
        &PARITY_FSG.replace(r#"["1/2", "1/2"]"#, r#"["1/2", "2/5"]"#),
    );
    let out = galedim(dir.path(), &["validate", "g.json"]);
    assert_eq!(out.status.code(), Some(1));
    let message = json(&out)["outputs"]["checks"]["construction"]["error"]
        .as_str()
        .unwrap()
        .to_string();
    assert!(
        message.contains("odd") && message.contains("account 1"),
        "{message}"
    );
    assert!(message.contains("9/10"), "{message}");
}

#[test]
fn validate_cover_gale() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "c.json",
        r#"{"s": 1, "rule": {"type": "cover", "set": ["00", "01", "11"], "s_prime": 0.5}}"#,
    );
    let out = galedim(dir.path(), &["validate", "c.json", "--depth", "6"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert_eq!(json(&out)["outputs"]["checks"]["kraft"]["holds"], true);
}

#[test]
fn validate_predictors() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "p.json",
        r#"{"type": "mixture", "components": [{"type": "kt"}, {"type": "constant", "p1": "1/3"}]}"#,
    );
    assert_eq!(
        galedim(dir.path(), &["validate", "p.json"]).status.code(),
        Some(0)
    );
    write(
        dir.path(),
        "q.json",
        r#"{"type": "table", "table": {"0": ["1/2", "1/3"]}}"#,
    );
    assert_eq!(
        galedim(dir.path(), &["validate", "q.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn parse_failures_exit_2() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "bad.json", "{ not json");
    let out = galedim(dir.path(), &["validate", "bad.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    let out = galedim(dir.path(), &["estimate", "missing.bits"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing.bits"));
    let out = galedim(
        dir.path(),
        &[
            "construct",
            "regularity",
            "--alpha",
            "3/4",
            "--beta",
            "1/2",
            "-n",
            "10",
            "--seed",
            "1",
            "--out",
            "x.bits",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
    assert_eq!(galedim(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn randomized_commands_need_a_seed() {
    let dir = TempDir::new().unwrap();
    let out = galedim(
        dir.path(),
        &[
            "construct",
            "biased",
            "--bias",
            "1/4",
            "-n",
            "10",
            "--out",
            "b.bits",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn constructions_write_sequences() {
    let dir = TempDir::new().unwrap();
    let out = galedim(
        dir.path(),
        &[
            "construct",
            "selfsimilar",
            "--set",
            "0,1",
            "-n",
            "16",
            "--out",
            "s.bits",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("s.bits"))
            .unwrap()
            .trim()
            .len(),
        16
    );
    assert_eq!(json(&out)["outputs"]["dimension"], 1.0);

    let out = galedim(
        dir.path(),
        &[
            "construct",
            "biased",
            "--bias",
            "1/4",
            "-n",
            "1000000",
            "--seed",
            "9",
            "--out",
            "b.bin",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let ones = json(&out)["outputs"]["ones"].as_f64().unwrap();
    assert!((ones - 250_000.0).abs() <= 0.002 * 1e6, "{ones}");
    assert_eq!(
        std::fs::metadata(dir.path().join("b.bin")).unwrap().len(),
        8 + 125_000
    );

    let out = galedim(
        dir.path(),
        &[
            "construct",
            "regularity",
            "--alpha",
            "1/2",
            "--beta",
            "1",
            "-n",
            "5000",
            "--seed",
            "2",
            "--out",
            "r.bits",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["outputs"]["sandwich"]["passed"], true);
    let ledger = std::fs::read_to_string(dir.path().join("r.bits.ledger.csv")).unwrap();
    assert!(ledger.starts_with("n,r_len,driver,gamma,k,random_total,end\n"));
}

#[test]
fn regularity_without_padding_is_the_biased_stream() {
    let dir = TempDir::new().unwrap();
    galedim(
        dir.path(),
        &[
            "construct",
            "regularity",
            "--alpha",
            "1",
            "--beta",
            "1",
            "-n",
            "100",
            "--seed",
            "4",
            "--out",
            "r.bits",
        ],
    );
    galedim(
        dir.path(),
        &[
            "construct",
            "biased",
            "--bias",
            "1/2",
            "-n",
            "100",
            "--seed",
            "4",
            "--out",
            "b.bits",
        ],
    );
    let r = std::fs::read(dir.path().join("r.bits")).unwrap();
    assert_eq!(r, std::fs::read(dir.path().join("b.bits")).unwrap());
}

#[test]
fn estimate_reports_every_method() {
    let dir = TempDir::new().unwrap();
    galedim(
        dir.path(),
        &[
            "construct",
            "biased",
            "--bias",
            "1/4",
            "-n",
            "20000",
            "--seed",
            "1",
            "--out",
            "b.bits",
        ],
    );
    let out = galedim(
        dir.path(),
        &["estimate", "b.bits", "--window", "4096:20000"],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let outputs = &report["outputs"];
    for method in ["compress", "fsg", "predict"] {
        assert!(outputs.get(method).is_some(), "{method}");
        assert!(outputs["bound_check"].get(method).is_some());
    }
    assert_eq!(report["config"]["window"], serde_json::json!([4096, 20000]));
    let fsg = outputs["fsg"]["lower"].as_f64().unwrap();
    assert!((fsg - 0.8113).abs() < 0.05, "{fsg}");

    let out = galedim(
        dir.path(),
        &[
            "estimate",
            "b.bits",
            "--methods",
            "compress",
            "--format",
            "csv",
        ],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("outputs.compress.lower,"));
    assert!(!text.contains("bound_check"));
}

#[test]
fn estimate_on_zeros() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "z.bits", &"0".repeat(1 << 16));
    let out = galedim(
        dir.path(),
        &["estimate", "z.bits", "--methods", "compress,fsg"],
    );
    let outputs = &json(&out)["outputs"];
    assert!(outputs["compress"]["upper"].as_f64().unwrap() < 0.1);
    assert!(outputs["fsg"]["lower"].as_f64().unwrap() <= galedim::fsg::SEARCH_TOLERANCE);
}

#[test]
fn deviation_table() {
    let dir = TempDir::new().unwrap();
    let out = galedim(
        dir.path(),
        &["deviation", "--bias", "1/2", "-n", "10,20", "--eps", "0.1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rows.headers().unwrap(),
        vec!["n", "exact", "mc", "mc_stderr", "bound"]
    );
    for row in rows.records() {
        let row = row.unwrap();
        assert_eq!(&row[1], "0");
        assert_eq!(&row[2], "");
    }

    let out = galedim(
        dir.path(),
        &[
            "deviation",
            "--bias",
            "1/3",
            "-n",
            "10,50,100",
            "--eps",
            "0.1",
            "--format",
            "json",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    for row in json(&out)["outputs"]["rows"].as_array().unwrap() {
        assert_eq!(row["exact_within_bound"], true);
    }

    let out = galedim(
        dir.path(),
        &[
            "deviation",
            "--bias",
            "1/3",
            "-n",
            "5000",
            "--eps",
            "0.1",
            "--trials",
            "10",
            "--seed",
            "3",
        ],
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("5000,mc-only,"));
}
