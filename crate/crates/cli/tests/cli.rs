use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn kohn(args: &[&str]) -> Output {
    kohn_env(args, &[])
}

fn kohn_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kohn"));
    cmd.args(args);
    for var in ["KOHN_FORMAT", "KOHN_TOL", "KOHN_TERMS", "KOHN_TERM_CAP", "KOHN_MIN_T", "KOHN_LINE_CAP"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run kohn")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Parsed CSV report: metadata comments and rows keyed by column.
struct Csv {
    meta: Vec<(String, String)>,
    rows: Vec<Vec<(String, String)>>,
}

impl Csv {
    fn parse(text: &str) -> Csv {
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# schema=1"));
        let mut meta = Vec::new();
        let mut header = None;
        for line in lines.by_ref() {
            if let Some(kv) = line.strip_prefix("# ") {
                let (k, v) = kv.split_once('=').unwrap();
                meta.push((k.to_string(), v.to_string()));
            } else {
                header = Some(line.split(',').map(str::to_string).collect::<Vec<_>>());
                break;
            }
        }
        let header = header.expect("header row");
        let rows = lines
            .map(|l| header.iter().cloned().zip(split_csv(l)).collect())
            .collect();
        Csv { meta, rows }
    }

    fn meta(&self, key: &str) -> &str {
        &self.meta.iter().find(|(k, _)| k == key).unwrap().1
    }

    fn get(&self, row: usize, col: &str) -> &str {
        &self.rows[row].iter().find(|(k, _)| k == col).unwrap().1
    }

    fn float(&self, row: usize, col: &str) -> f64 {
        self.get(row, col).parse().unwrap()
    }
}

fn split_csv(line: &str) -> Vec<String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '"' => quoted = !quoted,
            ',' if !quoted => cells.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    cells.push(cur);
    cells
}

#[test]
fn coeff_series_zeta_n2() {
    let out = kohn(&["coeff", "--n", "2", "--method", "series-zeta", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.rows.len(), 1);
    assert!((csv.float(0, "value") - 0.411233516712057).abs() < 1e-15);
    assert!((csv.float(0, "value") - PI * PI / 24.0).abs() < 1e-16);
    assert_eq!(csv.get(0, "exact_form"), "(1/8)·(2·ζ(2))");
}

#[test]
fn coeff_all_methods_n3() {
    let out = kohn(&["coeff", "--n", "3", "--method", "all", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.rows.len(), 4);
    assert_eq!(csv.meta("reconciled"), "true");
    let value = |m: &str| (0..4).find(|&i| csv.get(i, "method") == m).map(|i| csv.float(i, "value")).unwrap();
    let precise = [value("series-zeta"), value("integral"), value("integral-intermediate")];
    for a in precise {
        for b in precise {
            assert!((a - b).abs() < 1e-9);
        }
    }
    let direct_row = (0..4).find(|&i| csv.get(i, "method") == "series-direct").unwrap();
    let bound = csv.float(direct_row, "error_bound");
    assert!((value("series-direct") - precise[0]).abs() <= bound);
}

#[test]
fn coeff_rejects_small_n() {
    let out = kohn(&["coeff", "--n", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("n >= 2"), "{}", stderr(&out));
}

#[test]
fn count_examples() {
    let out = kohn(&["count", "--n", "2", "--lambda", "4", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.get(0, "count"), "8");
    assert_eq!(csv.float(0, "ratio"), 0.5);

    let out = kohn(&["count", "--n", "2", "--lambda", "1", "--format", "csv"]);
    assert_eq!(Csv::parse(&stdout(&out)).get(0, "count"), "0");
}

#[test]
fn count_modes_lists_lines() {
    let out = kohn(&["count", "--n", "2", "--lambda", "4", "--modes"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.meta("count"), "8");
    assert_eq!(csv.rows.len(), 3);
    let rows: Vec<(String, String, String, String)> = (0..3)
        .map(|i| {
            (
                csv.get(i, "p").to_string(),
                csv.get(i, "q").to_string(),
                csv.get(i, "eigenvalue").to_string(),
                csv.get(i, "multiplicity").to_string(),
            )
        })
        .collect();
    let expected = [("0", "1", "2", "2"), ("1", "1", "4", "3"), ("0", "2", "4", "3")];
    for (got, want) in rows.iter().zip(expected) {
        assert_eq!((got.0.as_str(), got.1.as_str(), got.2.as_str(), got.3.as_str()), want);
    }
}

#[test]
fn count_resource_cap_exits_3() {
    let out = kohn(&["count", "--n", "2", "--lambda", "1e30"]);
    assert_eq!(code(&out), 3);
    let out = kohn_env(&["count", "--n", "2", "--lambda", "1000"], &[("KOHN_LINE_CAP", "10")]);
    assert_eq!(code(&out), 3);
    let out = kohn_env(&["count", "--n", "2", "--lambda", "1000", "--line-cap", "1000"], &[("KOHN_LINE_CAP", "10")]);
    assert_eq!(code(&out), 0);
}

#[test]
fn heat_rows_approach_limit() {
    let out = kohn(&["heat", "--n", "2", "--t", "0.1,0.01,0.001", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.rows.len(), 3);
    let limit = PI * PI / 12.0;
    let errors: Vec<f64> = (0..3).map(|i| (csv.float(i, "scaled_trace") - limit).abs()).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2]);
    assert!(errors[2] < 1e-3);
}

#[test]
fn heat_rejects_negative_t() {
    let out = kohn(&["heat", "--n", "2", "--t", "-1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn heat_verify_cross_checks() {
    let out = kohn(&["heat", "--n", "3", "--t", "0.5", "--verify", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.get(0, "verified"), "true");
}

#[test]
fn heat_term_cap_exits_3() {
    let out = kohn_env(&["heat", "--n", "2", "--t", "0.001"], &[("KOHN_TERM_CAP", "10")]);
    assert_eq!(code(&out), 3);
    let out = kohn(&["heat", "--n", "2", "--t", "1e-7"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("floor"));
}

#[test]
fn converge_error_shrinks() {
    let out = kohn(&["converge", "--n", "2", "--lambdas", "100,1000,10000", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    let errors: Vec<f64> = (0..3).map(|i| csv.float(i, "error").abs()).collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2]);

    let out = kohn(&["converge", "--n", "3", "--lambdas", "100", "--format", "csv"]);
    assert_eq!(Csv::parse(&stdout(&out)).rows.len(), 1);

    assert_eq!(code(&kohn(&["converge", "--n", "2", "--lambdas", ""])), 1);
    assert_eq!(code(&kohn(&["converge", "--n", "2"])), 1);
}

#[test]
fn stanton_at_symmetric_point() {
    let out = kohn(&["stanton", "--n", "3", "--q", "1", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert!((csv.float(0, "f_re") - PI * PI / 72.0).abs() < 1e-9);
    assert!(csv.float(0, "residual") < 1e-8);
}

#[test]
fn stanton_at_pole() {
    let out = kohn(&["stanton", "--n", "3", "--q", "0", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.get(0, "f_status"), "out-of-domain");
    assert_eq!(csv.get(0, "f_re"), "");
    assert!(csv.meta("g0_minus_weyl").parse::<f64>().unwrap() < 1e-8);
    assert!((csv.float(0, "g_re") - PI * PI / 144.0).abs() < 1e-8);
}

#[test]
fn stanton_rejections() {
    assert_eq!(code(&kohn(&["stanton", "--n", "2", "--q", "0.5"])), 1);
    assert_eq!(code(&kohn(&["stanton", "--n", "3", "--q", "-1.5"])), 1);
    assert_eq!(code(&kohn(&["stanton", "--n", "3", "--q", "2,1"])), 1);
    assert_eq!(code(&kohn(&["stanton", "--n", "3", "--q", "a,b"])), 1);
}

#[test]
fn stanton_grid_emits_csv() {
    let out = kohn(&["stanton", "--n", "4", "--grid", "0.3,2.5,-0.5,0.5,3"]);
    assert_eq!(code(&out), 0);
    let csv = Csv::parse(&stdout(&out));
    assert_eq!(csv.rows.len(), 9);
    for i in 0..9 {
        assert!(csv.float(i, "residual") < 1e-8);
    }
}

#[test]
fn json_round_trips_bit_for_bit() {
    let args = ["heat", "--n", "3", "--t", "0.1,0.5,2", "--verify"];
    let json = kohn(&[&args[..], &["--format", "json"]].concat());
    let csv = kohn(&[&args[..], &["--format", "csv"]].concat());
    let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
    let csv = Csv::parse(&stdout(&csv));
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "heat");
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for (i, row) in rows.iter().enumerate() {
        for col in ["t", "g", "scaled_trace", "truncation_bound", "g_direct"] {
            let a = row[col].as_f64().unwrap();
            assert_eq!(a.to_bits(), csv.float(i, col).to_bits(), "{col}");
        }
    }
    let again: Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
}

#[test]
fn json_big_counts_are_strings() {
    let out = kohn(&["count", "--n", "6", "--lambda", "5000", "--format", "json"]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let count = doc["rows"][0]["count"].as_str().unwrap();
    assert!(count.len() > 15 && count.chars().all(|c| c.is_ascii_digit()));
}

#[test]
fn machine_output_is_deterministic() {
    for format in ["csv", "json"] {
        let args = ["coeff", "--n", "4", "--method", "all", "--terms", "1000", "--format", format];
        let a = kohn(&args);
        let b = kohn(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("kohn-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("count.csv");
    let out = kohn(&["count", "--n", "3", "--lambda", "50", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("# schema=1\nn,lambda,count,ratio\n"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&kohn(&["--help"])), 0);
    assert_eq!(code(&kohn(&["--version"])), 0);
    assert_eq!(code(&kohn(&[])), 1);
    assert_eq!(code(&kohn(&["coeff", "--n", "2", "--format", "xml"])), 1);
    assert_eq!(code(&kohn(&["coeff", "--n", "2", "--method", "simpson"])), 1);
}

#[test]
fn env_tolerance_is_overridden_by_flag() {
    let out = kohn_env(&["coeff", "--n", "2", "--method", "integral", "--format", "csv"], &[("KOHN_TOL", "-1")]);
    assert_eq!(code(&out), 1);
    let out = kohn_env(
        &["coeff", "--n", "2", "--method", "integral", "--tol", "1e-10", "--format", "csv"],
        &[("KOHN_TOL", "-1")],
    );
    assert_eq!(code(&out), 0);
}
