use std::process::{Command, Output};

use serde_json::Value;

fn wordmaplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordmaplab"))
        .args(args)
        .env_remove("WORDMAPLAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identity_check_csv_layout() {
    let o = wordmaplab(&["identity-check", "--q", "3", "--trunc", "40", "--no-timestamp"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# tool: wordmaplab\n"));
    assert!(text.contains("# seed: "));
    assert!(text.contains("# config: {"));
    assert!(!text.contains("# timestamp_unix"));
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "n,d_n,expected,equal");
    assert_eq!(body.len(), 42);
    assert_eq!(body[4], "3,27,27,true");
}

#[test]
fn timestamp_present_by_default() {
    let o = wordmaplab(&["zeta", "--group", "A5"]);
    assert!(stdout(&o).contains("# timestamp_unix: "));
}

#[test]
fn single_letter_word_is_uniform() {
    let o = wordmaplab(&["wordmap", "--group", "A5", "--word", "x1", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["metadata"]["summary"]["l1_num"], "0");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["probability_num"], "1");
    assert_eq!(rows[0]["probability_den"], "60");
}

#[test]
fn two_routes_agree_on_square_word() {
    let o = wordmaplab(&["wordmap", "--group", "A5", "--word", "x1^2 x2^2", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let gap = v["metadata"]["summary"]["character_max_discrepancy"].as_f64().unwrap();
    assert!(gap < 1e-8);
    assert_eq!(v["metadata"]["summary"]["method"], "convolution");
    assert!(v["metadata"]["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn monte_carlo_is_labeled() {
    let o = wordmaplab(&["wordmap", "--group", "A5", "--word", "x1 x2 x1^-1 x2^-1", "--monte-carlo", "20000"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# approximate: true"));
    assert!(text.contains("class_index,class_size,mass_estimate,standard_error"));
}

#[test]
fn tail_columns() {
    let o = wordmaplab(&["tail", "--family", "linear", "--q", "2", "--trunc", "12", "--m-max", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\nfamily,q,n,m,tail_num,tail_den\n"));
    assert!(text.contains("# summary.empirical_fits: "));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(wordmaplab(&["wordmap", "--group", "B7", "--word", "x1"]).status.code(), Some(2));
    assert_eq!(wordmaplab(&["wordmap", "--group", "A5", "--word", "x1^0"]).status.code(), Some(2));
    assert_eq!(wordmaplab(&["zeta", "--group", "A5", "--s", "-1"]).status.code(), Some(2));
    assert_eq!(wordmaplab(&["unipotents", "--group", "A5"]).status.code(), Some(2));
    assert_eq!(wordmaplab(&["bogus"]).status.code(), Some(2));
}

#[test]
fn budget_env_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_wordmaplab"))
        .args(["wordmap", "--group", "A5", "--word", "x1 x2 x1^-1 x2^-1"])
        .env("WORDMAPLAB_BUDGET", "elements=1000,pair_ops=100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("budget exceeded") && err.contains("WORDMAPLAB_BUDGET"));
}

#[test]
fn table_round_trip_and_tamper_detection() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("psl27.json");
    let p = path.to_str().unwrap();
    assert!(wordmaplab(&["table", "emit", "--group", "PSL2(7)", "--out", p]).status.success());
    let o = wordmaplab(&["table", "ingest", "--input", p]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("# summary.order: 168"));

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["characters"][3][2][0] = Value::from(0.5);
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = wordmaplab(&["table", "ingest", "--input", p]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("invariant violated"));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["wordmap", "--group", "A5", "--word", "x1 x2 x3 x1^-1 x2^-1 x3^-1", "--no-timestamp"];
    let one = wordmaplab(&[&args[..], &["--threads", "1"]].concat());
    let four = wordmaplab(&[&args[..], &["--threads", "4"]].concat());
    let strip = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with("# config")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&one), strip(&four));
}
