// SPDX-License-Identifier: Apache-2.0

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn cntmin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cntmin")).args(args).env_remove("CNTMIN_CONFIG").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn config(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

fn path(f: &NamedTempFile) -> &str {
    f.path().to_str().unwrap()
}

fn csv_column(text: &str, col: usize) -> Vec<f64> {
    text.lines().skip(1).map(|l| l.split(',').nth(col).unwrap().parse().unwrap()).collect()
}

#[test]
fn device_reports() {
    let o = cntmin(&["device", "19", "0"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("semiconducting") && s.contains("1.4875 nm") && s.contains("0.2891 V"), "{s}");

    let o = cntmin(&["device", "9", "0"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("metallic"));

    assert_eq!(code(&cntmin(&["device", "0", "0"])), 2);
}

#[test]
fn device_json() {
    let o = cntmin(&["device", "19", "0", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["kind"], "semiconducting");
    assert!((v["threshold_voltage"].as_f64().unwrap() - 0.2891).abs() < 5e-5);
    let m: serde_json::Value = serde_json::from_slice(&cntmin(&["--json", "device", "9", "0"]).stdout).unwrap();
    assert!(m["threshold_voltage"].is_null());
}

#[test]
fn truth_tables() {
    let s = stdout(&cntmin(&["truthtable", "7"]));
    let expected = "sum_in,minority\n0,1\n1,1\n2,1\n3,1\n4,0\n5,0\n6,0\n7,0\n";
    assert_eq!(s, expected);
    assert_eq!(stdout(&cntmin(&["truthtable", "1"])), "sum_in,minority\n0,1\n1,0\n");

    let full = stdout(&cntmin(&["truthtable", "3", "--full"]));
    let rows: Vec<&str> = full.lines().skip(1).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.contains(&"110,2,0") && rows.contains(&"000,0,1"));

    assert_eq!(code(&cntmin(&["truthtable", "0"])), 2);
    assert_eq!(code(&cntmin(&["truthtable", "25"])), 2);
}

#[test]
fn cost_reports() {
    let s = stdout(&cntmin(&["cost", "7"]));
    for needle in ["64", "896", "9", "98.9955%"] {
        assert!(s.contains(needle), "{needle} missing from {s}");
    }
    let v: serde_json::Value = serde_json::from_slice(&cntmin(&["cost", "3", "--json"]).stdout).unwrap();
    assert_eq!((v["sop_terms"].as_u64(), v["conventional_transistors"].as_u64()), (Some(4), Some(24)));
    assert_eq!(v["proposed_devices"], 5);
    assert!((v["reduction_pct"].as_f64().unwrap() - 79.1667).abs() < 1e-4);
    assert_eq!(code(&cntmin(&["cost", "4"])), 2);
}

#[test]
fn eval_and_check_defaults() {
    let o = cntmin(&["eval", "--vector", "0000111"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("logic     1"));
    let o = cntmin(&["eval", "--vector", "0001111", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["logic"], "zero");

    assert_eq!(code(&cntmin(&["check"])), 0);
    assert_eq!(code(&cntmin(&["eval"])), 2);
    assert_eq!(code(&cntmin(&["eval", "--vector", "0101"])), 2);
}

#[test]
fn check_outside_window_fails() {
    let f = config(r#"{"vtc": {"v_sw": 0.30, "width_w": 0.0}}"#);
    let o = cntmin(&["check", path(&f)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn config_validation_errors() {
    let unknown = config(r#"{"gate": {"n": 7}, "colour": "blue"}"#);
    assert_eq!(code(&cntmin(&["check", path(&unknown)])), 2);
    let even = config(r#"{"gate": {"n": 8}}"#);
    assert_eq!(code(&cntmin(&["check", path(&even)])), 2);
    let broken = config("{ not json");
    assert_eq!(code(&cntmin(&["check", path(&broken)])), 2);
    assert_eq!(code(&cntmin(&["check", "/nonexistent/cfg.json"])), 2);
}

#[test]
fn config_from_environment() {
    let f = config(r#"{"gate": {"n": 5, "vdd": 1.0}, "vector": "00011"}"#);
    let o = Command::new(env!("CARGO_BIN_EXE_cntmin"))
        .args(["eval", "--json"])
        .env("CNTMIN_CONFIG", f.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["vdd"], 1.0);
    assert!((v["result"]["vm"].as_f64().unwrap() - 0.4).abs() < 1e-12);
}

#[test]
fn nand_binding_config() {
    let f = config(r#"{"gate": {"n": 7, "tied": {"level": 0, "weight": 3}}, "vector": "0101"}"#);
    let v: serde_json::Value = serde_json::from_slice(&cntmin(&["eval", path(&f), "--json"]).stdout).unwrap();
    assert!((v["result"]["vm"].as_f64().unwrap() - 0.25714).abs() < 5e-6);
    assert_eq!(code(&cntmin(&["check", path(&f)])), 0);
}

#[test]
fn derive_gates() {
    let o = cntmin(&["derive", "nand", "4"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(
        s.contains("minority-7") && s.contains("3 inputs to 0") && s.contains("weight 3") && s.contains("verified")
    );
    let s = stdout(&cntmin(&["derive", "nor", "4"]));
    assert!(s.contains("3 inputs to 1") && s.contains("verified"));
    assert_eq!(code(&cntmin(&["derive", "xor", "4"])), 2);
    assert_eq!(code(&cntmin(&["derive", "nand", "0"])), 2);
}

#[test]
fn sweep_csv() {
    let f = config(
        r#"{"model": {"r_eff": 2000, "c_par": 1e-15, "alpha": 0.5},
            "sweep": {"param": "c_load", "start": 2e-15, "stop": 20e-15, "steps": 10}}"#,
    );
    let o = cntmin(&["sweep", path(&f)]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("param,delay_s,energy_j\n"));
    let delays = csv_column(&s, 1);
    assert_eq!(delays.len(), 10);
    assert!(delays.windows(2).all(|w| w[0] < w[1]));
    // byte-stable
    assert_eq!(s, stdout(&cntmin(&["sweep", path(&f)])));

    let vdd =
        config(r#"{"model": {"r_eff": 2000, "c_par": 1e-15}, "sweep": {"param": "vdd", "values": [0.8, 0.9, 1.0]}}"#);
    let energies = csv_column(&stdout(&cntmin(&["sweep", path(&vdd)])), 2);
    assert!(energies.windows(2).all(|w| w[0] < w[1]));

    let empty = config(r#"{"model": {"r_eff": 2000, "c_par": 1e-15}, "sweep": {"param": "vdd", "values": []}}"#);
    assert_eq!(code(&cntmin(&["sweep", path(&empty)])), 2);
    assert_eq!(code(&cntmin(&["sweep"])), 2);
}

#[test]
fn sweep_to_file() {
    let f = config(r#"{"model": {"r_eff": 1000, "c_par": 0}, "sweep": {"param": "c_load", "values": [2e-15]}}"#);
    let out = tempfile::tempdir().unwrap();
    let target = out.path().join("sweep.csv");
    let o = cntmin(&["sweep", path(&f), "--out", target.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(
        std::fs::read_to_string(target).unwrap(),
        "param,delay_s,energy_j\n2.00000e-15,1.38629e-12,1.62000e-15\n"
    );
}

#[test]
fn calibrate_round_trip() {
    // delays from r_eff = 1 kΩ, c_par = 0.5 fF
    let ln2 = std::f64::consts::LN_2;
    let d = |c: f64| ln2 * 1e3 * (0.5e-15 + c);
    let f = config(&format!(r#"{{"points": [[2e-15, {:e}], [4e-15, {:e}]]}}"#, d(2e-15), d(4e-15)));
    let o = cntmin(&["calibrate", path(&f)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "r_eff_ohm,c_par_f\n1.00000e3,5.00000e-16\n");

    let same = config(r#"{"points": [[2e-15, 5e-12], [2e-15, 6e-12]]}"#);
    assert_eq!(code(&cntmin(&["calibrate", path(&same)])), 1);
    let falling = config(r#"{"points": [[2e-15, 6e-12], [4e-15, 5e-12]]}"#);
    assert_eq!(code(&cntmin(&["calibrate", path(&falling)])), 1);
    let single = config(r#"{"points": [[2e-15, 6e-12]]}"#);
    assert_eq!(code(&cntmin(&["calibrate", path(&single)])), 2);
}

#[test]
fn monte_carlo_csv() {
    let f = config(r#"{"variation": {"sigma_rel": [0, 0.05, 0.1], "trials": 500, "seed": 7, "sensitivity": 4}}"#);
    let o = cntmin(&["mc", path(&f)]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("sigma_rel,trials,yield\n"));
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[1], "0.00000e0,500,1.00000e0");
    let yields = csv_column(&s, 2);
    assert!(yields.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(s, stdout(&cntmin(&["mc", path(&f)])));

    let metallic = config(r#"{"device": {"n1": 9, "n2": 0}, "variation": {"sigma_rel": 0.05, "trials": 5}}"#);
    assert_eq!(code(&cntmin(&["mc", path(&metallic)])), 2);
}

#[test]
fn reference_tables() {
    for id in ["table3", "table4"] {
        let o = cntmin(&["paperdata", id]);
        assert_eq!(code(&o), 0);
        let s = stdout(&o);
        let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.ends_with(",pass")));
    }
    let v: serde_json::Value = serde_json::from_slice(&cntmin(&["paperdata", "table5", "--json"]).stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(code(&cntmin(&["paperdata", "table9"])), 2);
}
