use std::process::{Command, Output};

use serde_json::Value;

fn mqcbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mqcbound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn bounds_grid_row_count() {
    let out = mqcbound(&["bounds", "--n", "500", "--p", "0.3,0.6", "--q-range", "1:500:1", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header, ["N", "q", "p", "rank", "lower", "upper", "log_lower", "log_upper"]);
    assert_eq!(rows.len(), 1000);
}

#[test]
fn bounds_single_order_one() {
    let (header, rows) = csv_rows(&mqcbound(&["bounds", "--n", "7", "--p", "0.3", "--q", "1"]));
    assert_eq!(rows.len(), 1);
    let get = |c: &str| rows[0][column(&header, c)].parse::<f64>().unwrap();
    assert!((get("lower") - 0.3).abs() < 1e-12);
    assert!((get("upper") - 0.6).abs() < 1e-12);
    assert_eq!(rows[0][column(&header, "rank")], "128");
}

#[test]
fn out_of_range_polarisation_is_a_usage_error() {
    let out = mqcbound(&["bounds", "--n", "4", "--p", "1.5", "--q", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(mqcbound(&["bounds", "--bogus"]).status.code(), Some(1));
}

#[test]
fn transition_grid_shape() {
    let out = mqcbound(&["transition", "--n", "5000,7500,10000", "--p-range", "0.05:0.95:0.05"]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 57);
    let (n, p, w) = (column(&header, "N"), column(&header, "p"), column(&header, "width"));
    let centre = rows.iter().find(|r| r[n] == "10000" && r[p] == "0.5").unwrap();
    let width: f64 = centre[w].parse().unwrap();
    assert!((width - 0.143).abs() <= 0.015, "{width}");
}

#[test]
fn figure2_crossing_and_decay() {
    let (header, rows) = csv_rows(&mqcbound(&["figure2", "--p", "0.99", "--n-range", "2:400:1"]));
    let n = column(&header, "N");
    let b = column(&header, "b_qN");
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r[n].parse().unwrap(), r[b].parse().unwrap()))
        .collect();
    let first = pts.iter().find(|(_, v)| *v < 0.99 / std::f64::consts::E).map(|(n, _)| *n);
    assert!(first.is_some_and(|n| (100.0..=400.0).contains(&n)), "{first:?}");

    let k = pts.len() as f64;
    let mx = pts.iter().map(|(x, _)| x).sum::<f64>() / k;
    let my = pts.iter().map(|(_, y)| y.ln()).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y.ln() - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    assert!(sxy / sxx < 0.0);
}

#[test]
fn verify_small_suite() {
    let out = mqcbound(&["verify", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["passed"], Value::Bool(true));
    let rows = doc["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["check"] == "zigzag_rank"
        && r["N"] == 4
        && r["q"] == 2
        && r["detail"].as_str().is_some_and(|d| d.starts_with("rank 12"))));
    let projector: Vec<f64> = rows
        .iter()
        .filter(|r| r["check"] == "projector_fourier")
        .map(|r| r["max_residual"].as_f64().unwrap())
        .collect();
    assert!(!projector.is_empty());
    assert!(projector.iter().all(|&x| x < 1e-10));
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = mqcbound(&[
            "verify", "--max-n", "3", "--seed", "42", "--format", "csv", "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv");
    assert!(!a.is_empty());
    assert_eq!(a, run("b.csv"));
    let b1 = mqcbound(&["bounds", "--n", "60", "--p-range", "0.1:0.9:0.2", "--q-range", "1:60:7"]);
    let b2 = mqcbound(&["bounds", "--n", "60", "--p-range", "0.1:0.9:0.2", "--q-range", "1:60:7"]);
    assert_eq!(b1.stdout, b2.stdout);
}

#[test]
fn json_meta_block() {
    let out = mqcbound(&["rank", "--n", "4", "--format", "json"]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["meta"]["seed"], 0);
    assert!(doc["meta"]["command_line"].as_str().unwrap().starts_with("mqcbound rank"));
    let rows = doc["rows"].as_array().unwrap();
    let q2 = rows.iter().find(|r| r["q"] == 2).unwrap();
    assert_eq!(q2["rank"], "12");
}
