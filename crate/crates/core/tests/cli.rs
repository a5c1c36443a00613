use std::path::Path;
use std::process::{Command, Output};

use su2ent::cli::StateFile;
use su2ent::measures::p_mu;
use su2ent::spin_algebra::Spin;
use su2ent::states::rho_p;

fn su2ent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_su2ent"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

/// Parse a CSV with a header; empty cells become `None`.
fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<Option<f64>>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| {
            l.split(',')
                .map(|c| if c.is_empty() { None } else { Some(c.parse().unwrap()) })
                .collect()
        })
        .collect();
    (header, rows)
}

fn eval_value(text: &str, measure: &str) -> f64 {
    text.lines()
        .find(|l| l.starts_with(&format!("{measure},")))
        .and_then(|l| l.split(',').nth(1))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn eval_examples() {
    let out = su2ent(&["eval", "--j", "1/2", "--p", "1", "--measure", "eof"]);
    assert_eq!(code(&out), 0);
    assert!((eval_value(&stdout(&out), "eof") - std::f64::consts::LN_2).abs() < 1e-6);

    let out = su2ent(&["eval", "--j", "3", "--p", "6/7", "--measure", "eof,negativity"]);
    let text = stdout(&out);
    assert_eq!(eval_value(&text, "eof"), 0.0);
    assert_eq!(eval_value(&text, "negativity"), 0.0);

    let out = su2ent(&["eval", "--j", "1", "--p", "1", "--measure", "concurrence"]);
    assert!((eval_value(&stdout(&out), "iconcurrence") - 0.942809).abs() < 1e-6);

    let out = su2ent(&["--bits", "eval", "--j", "1/2", "--p", "1", "--measure", "eof"]);
    assert!((eval_value(&stdout(&out), "eof") - 1.0).abs() < 1e-12);
}

#[test]
fn eval_json_and_oracle() {
    let out = su2ent(&["eval", "--j", "1/2", "--p", "0.9", "--measure", "eof", "--oracle", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let report = &doc["reports"][0];
    assert_eq!(report["method"], "oracle");
    assert!((report["value"].as_f64().unwrap() - 0.500402).abs() < 1e-4);
    assert!(report["metadata"]["restarts"].as_u64().unwrap() > 0);
}

#[test]
fn usage_and_domain_errors_exit_with_one() {
    for args in [
        vec!["eval", "--j", "0", "--p", "0.5"],
        vec!["eval", "--j", "1", "--p", "1.2"],
        vec!["eval", "--j", "1/3", "--p", "0.5"],
        vec!["eval", "--j", "1"],
        vec!["figure", "3"],
        vec!["frobnicate"],
        vec!["sweep", "--j", "1", "--steps", "1"],
        vec!["verify", "--j", "1", "--target", "pmu", "--mu", "0.9"],
    ] {
        let out = su2ent(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(code(&su2ent(&["--help"])), 0);
}

#[test]
fn unwritable_output_exits_with_three() {
    let out = su2ent(&["--out", "/nonexistent-dir/x.csv", "sweep", "--j", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn sweep_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let p = path.to_str().unwrap();
    let out = su2ent(&["--out", p, "sweep", "--j", "1/2", "--steps", "21", "--measure", "eof,tangle"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = parse_csv(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["p", "eof", "tangle"]);
    assert_eq!(rows.len(), 21);
    for w in rows.windows(2) {
        assert!(w[1][0].unwrap() > w[0][0].unwrap());
    }
    for row in &rows {
        assert_eq!(row.len(), 3);
        let (p, e) = (row[0].unwrap(), row[1].unwrap());
        if p <= 0.5 {
            assert_eq!(e, 0.0);
        } else {
            assert!(e > 0.0);
        }
    }
    assert!((rows[20][1].unwrap() - std::f64::consts::LN_2).abs() < 1e-11);

    let out = su2ent(&["sweep", "--j", "1", "--measure", "iconcurrence,crnegativity"]);
    let (_, rows) = parse_csv(&stdout(&out));
    assert!(rows.iter().all(|r| r[1] == r[2]));

    let out = su2ent(&["sweep", "--j", "3", "--steps", "36"]);
    let (_, rows) = parse_csv(&stdout(&out));
    for row in &rows {
        let (p, e) = (row[0].unwrap(), row[1].unwrap());
        // the printed p is rounded, so the grid point at the threshold itself is ambiguous
        if (p - 6.0 / 7.0).abs() < 1e-9 {
            assert!(e < 1e-12);
        } else {
            assert_eq!(e > 0.0, p > 6.0 / 7.0, "p = {p}");
        }
    }
    assert!((rows.last().unwrap()[1].unwrap() - 0.410116318288).abs() < 1e-11);
}

#[test]
fn figures() {
    let out = su2ent(&["figure", "1"]);
    assert_eq!(code(&out), 0);
    let (header, rows) = parse_csv(&stdout(&out));
    assert_eq!(header, ["p", "j=1/2", "j=1", "j=3"]);
    assert_eq!(rows.len(), 400);
    let thresholds = [0.5, 2.0 / 3.0, 6.0 / 7.0];
    for row in &rows {
        let p = row[0].unwrap();
        assert!(p <= 1.0 - 1e-4 + 1e-12);
        for (cell, t) in row[1..].iter().zip(thresholds) {
            match cell {
                Some(v) => assert!(p > t && *v > 0.0),
                None => assert!(p <= t),
            }
        }
    }

    let out = su2ent(&["figure", "2"]);
    let (_, rows) = parse_csv(&stdout(&out));
    let last = rows.last().unwrap();
    assert_eq!(last[0], Some(1.0));
    for (v, expected) in last[1..].iter().zip([std::f64::consts::LN_2, 0.636514168295, 0.410116318288]) {
        assert!((v.unwrap() - expected).abs() < 1e-11);
    }
}

#[test]
fn verify_examples() {
    let out = su2ent(&["verify", "--j", "1/2", "--p", "0.6,0.8,0.95", "--target", "roof"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for pt in doc["points"].as_array().unwrap() {
        assert!(pt["gap"].as_f64().unwrap().abs() <= 1e-3);
        assert_eq!(pt["pass"], true);
        assert!(pt["closed_form"].is_number() && pt["oracle_value"].is_number());
    }

    let out = su2ent(&["verify", "--j", "1", "--target", "pmu", "--mu", "0.05,0.2"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for pt in doc["points"].as_array().unwrap() {
        let mu = pt["mu"].as_f64().unwrap();
        let exact = p_mu(Spin::ONE, mu).unwrap();
        assert!((pt["oracle_value"].as_f64().unwrap() - exact).abs() <= 1e-5);
    }

    let out = su2ent(&["verify", "--j", "1/2", "--p", "0.4", "--target", "epsilon"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["points"][0]["closed_form"].as_f64(), Some(0.0));
    assert!(doc["points"][0]["oracle_value"].as_f64().unwrap() <= 1e-6);

    let out = su2ent(&["verify", "--j", "1", "--p", "0.8,0.95,1", "--target", "eof"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn failed_verification_exits_with_two() {
    // One iteration cannot reach the optimum, so the gap check must fail.
    let out = su2ent(&[
        "--tol", "1e-12", "verify", "--j", "1", "--p", "0.9", "--target", "roof", "--max-iterations", "1",
        "--restarts", "1",
    ]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["pass"], false);
    assert!(doc["points"][0]["diagnostics"]["message"].is_string());
}

#[test]
fn fixed_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let mut full = vec!["--seed", "17", "--out", path.to_str().unwrap()];
        full.extend_from_slice(args);
        assert_eq!(code(&su2ent(&full)), 0);
        std::fs::read(path).unwrap()
    };
    let verify = ["verify", "--j", "3/2", "--p", "0.8,0.9", "--target", "roof"];
    assert_eq!(run("a.json", &verify), run("b.json", &verify));
    let twirl = ["twirl", "--state", "random", "--j1", "1", "--j2", "1", "--samples", "2000"];
    assert_eq!(run("a.state", &twirl), run("b.state", &twirl));
}

fn write_state(dir: &Path, name: &str, file: &StateFile) -> String {
    let path = dir.join(name);
    std::fs::write(&path, file.to_json()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn twirl_examples() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("out.json");
    let out = su2ent(&[
        "--out", out_path.to_str().unwrap(), "twirl", "--state", "chi", "--j1", "1", "--mu", "0.2",
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let expected_p = p_mu(Spin::ONE, 0.2).unwrap();
    let lower = summary["overlaps"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["J"] == "1/2")
        .unwrap();
    assert!((lower["p"].as_f64().unwrap() - expected_p).abs() < 1e-12);
    let twirled = StateFile::read(&out_path).unwrap().to_density().unwrap();
    let target = rho_p(Spin::ONE, expected_p).unwrap();
    assert!(twirled.trace_distance(&target) < 1e-12);

    // idempotence through a file
    let input = write_state(dir.path(), "rho.json", &StateFile::from_density(&rho_p(Spin::ONE, 0.7).unwrap()));
    let out = su2ent(&["twirl", "--input", &input, "--j1", "1"]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(summary["input_to_twirl_trace_distance"].as_f64().unwrap() < 1e-12);

    let mc_path = dir.path().join("mc.json");
    let out = su2ent(&[
        "--seed", "5", "twirl", "--state", "random", "--j1", "1", "--samples", "10000", "--mc-out",
        mc_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mc = &summary["monte_carlo"];
    assert!(mc["trace_distance"].as_f64().unwrap() <= mc["bound"].as_f64().unwrap());
    assert!(StateFile::read(&mc_path).unwrap().to_density().is_ok());
}

#[test]
fn malformed_state_file_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"dims\": [3, 2],\n  \"data\": [[1, 0], [0]]\n}").unwrap();
    let out = su2ent(&["twirl", "--input", path.to_str().unwrap(), "--j1", "1"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    std::fs::write(&path, r#"{"dims": [3, 2], "data": [[1, 0]]}"#).unwrap();
    let out = su2ent(&["twirl", "--input", path.to_str().unwrap(), "--j1", "1"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("field data"));

    let out = su2ent(&["twirl", "--input", "/nonexistent/state.json", "--j1", "1"]);
    assert_eq!(code(&out), 3);
}
