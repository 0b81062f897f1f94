use std::process::{Command, Output};

use gridzeta_cli::parse_complex;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gridzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?}: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv(args: &[&str]) -> Vec<Vec<String>> {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?}: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn z_of(v: &Value) -> (f64, f64) {
    (v["z"][0].as_f64().unwrap(), v["z"][1].as_f64().unwrap())
}

#[test]
fn eval_at_zero_every_route() {
    for route in ["theta", "quadrature", "series"] {
        let v = json(&["eval", "--u", "0", "--route", route]);
        assert_eq!(z_of(&v), (1.0, 0.0), "route {route}");
    }
}

#[test]
fn eval_routes_agree() {
    let a = z_of(&json(&["eval", "--u", "0.1", "--route", "theta"]));
    let b = z_of(&json(&["eval", "--u", "0.1", "--route", "quadrature"]));
    assert!((a.0 - b.0).abs() < 1e-8 && (a.1 - b.1).abs() < 1e-8);
    let s = z_of(&json(&[
        "eval", "--u", "0.05", "--route", "series", "--order", "20",
    ]));
    let t = z_of(&json(&["eval", "--u", "0.05", "--route", "theta"]));
    assert!((s.0 - t.0).abs() <= 1e-12);
}

#[test]
fn eval_complex_literal_and_region() {
    let v = json(&["eval", "--u=-0.1+0.2i"]);
    assert_eq!(v["region"], "in_omega");
    assert_eq!(v["u"][0].as_f64().unwrap(), -0.1);
    assert!(v["t"].is_array() && v["k"].is_array());
}

#[test]
fn domain_error_exit_code_and_json() {
    let out = run(&["eval", "--u", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["kind"], "domain");
    let out = run(&["eval", "--u", "0.4", "--route", "series"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn series_orders() {
    let v = json(&["series", "--order", "20"]);
    let z: Vec<&str> = v["zeta"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(
        z,
        [
            "1/1",
            "0/1",
            "2/1",
            "4/1",
            "29/1",
            "160/1",
            "1070/1",
            "7192/1",
            "50688/1",
            "365376/1",
            "2695122/1"
        ]
    );
    let det: Vec<&str> = v["det"]
        .as_array()
        .unwrap()
        .iter()
        .take(7)
        .map(|x| x.as_str().unwrap())
        .collect();
    assert_eq!(
        det,
        ["1/1", "1/1", "-1/1", "-5/1", "-30/1", "-174/1", "-1120/1"]
    );
    let v = json(&["series", "--order", "1"]);
    assert_eq!(v["zeta"], serde_json::json!(["1/1", "0/1"]));
}

#[test]
fn plot_real_zeta_rows() {
    let rows = csv(&[
        "plot",
        "--kind",
        "real_zeta",
        "--samples",
        "5",
        "--range=-0.2,0.2",
        "--format",
        "csv",
    ]);
    assert_eq!(rows.len(), 5);
    let num = |r: &Vec<String>, i: usize| r[i].parse::<f64>().unwrap();
    assert_eq!(num(&rows[2], 0), 0.0);
    assert_eq!(num(&rows[2], 1), 1.0);
    assert_eq!(num(&rows[0], 1), num(&rows[4], 1));
    let out = run(&["plot", "--kind", "real_zeta", "--range=-0.4,0.2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plot_sheets_abs_vieta() {
    let rows = csv(&[
        "plot",
        "--kind",
        "sheets_abs",
        "--samples",
        "6",
        "--format",
        "csv",
    ]);
    assert!(!rows.is_empty());
    for pair in rows.chunks(2) {
        if pair.len() < 2 || pair[0][..2] != pair[1][..2] {
            continue;
        }
        let u = |r: &Vec<String>| {
            gridzeta::Complex64::new(r[2].parse().unwrap(), r[3].parse().unwrap())
        };
        assert!((u(&pair[0]) * u(&pair[1]) - 1.0 / 3.0).norm() < 1e-10);
    }
}

#[test]
fn plot_imag_branchcut_has_rows() {
    let rows = csv(&[
        "plot",
        "--kind",
        "imag_branchcut",
        "--samples",
        "11",
        "--format",
        "csv",
    ]);
    assert!(rows.len() > 60);
    assert!(rows.iter().all(|r| r.len() == 3));
}

#[test]
fn sheets_depth_zero_is_principal() {
    let v = json(&["sheets", "--u", "0.15", "--depth", "0"]);
    assert_eq!(v["distinct_count"], 1);
    let principal = z_of(&json(&["eval", "--u", "0.15"]));
    assert_eq!(v["distinct_z"][0][0].as_f64().unwrap(), principal.0);
}

#[test]
fn converge_torus_decreases() {
    let rows = csv(&[
        "converge", "--family", "torus", "--u", "0.1", "--sizes", "8,16,32", "--format", "csv",
    ]);
    let errs: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
    let out = run(&[
        "converge", "--family", "grid", "--u", "0.3", "--sizes", "4,8",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn walks_table() {
    let v = json(&["walks", "--max-length", "8", "--classes", "4"]);
    assert_eq!(v["consistent"], true);
    assert_eq!(v["rows"][7]["geodesics_dp"], "216");
    assert_eq!(v["classes"]["unoriented"].as_array().unwrap().len(), 1);
}

#[test]
fn check_passes_and_detects_fault() {
    assert!(run(&["check"]).status.success());
    let out = run(&["check", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn csv_numbers_round_trip() {
    let out = run(&["eval", "--u", "0.1+0.05i", "--format", "csv"]);
    let j = json(&["eval", "--u", "0.1+0.05i"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let z_re: f64 = row[8].parse().unwrap();
    assert_eq!(z_re, j["z"][0].as_f64().unwrap());
}

#[test]
fn deterministic_output() {
    let a = run(&["plot", "--kind", "sheets_abs", "--samples", "5"]).stdout;
    let b = run(&["plot", "--kind", "sheets_abs", "--samples", "5"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn complex_literals() {
    let z = parse_complex("0.1").unwrap();
    assert_eq!((z.re, z.im), (0.1, 0.0));
    let z = parse_complex("-0.1+0.2i").unwrap();
    assert_eq!((z.re, z.im), (-0.1, 0.2));
    let z = parse_complex("-2i").unwrap();
    assert_eq!((z.re, z.im), (0.0, -2.0));
    let z = parse_complex("1e-3-2.5e-2i").unwrap();
    assert_eq!((z.re, z.im), (1e-3, -2.5e-2));
    let z = parse_complex(" 0.3 - 0.1i ").unwrap();
    assert_eq!((z.re, z.im), (0.3, -0.1));
    assert!(parse_complex("abc").is_err());
    assert!(parse_complex("nan").is_err());
}
