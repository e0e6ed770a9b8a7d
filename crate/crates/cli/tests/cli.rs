use std::path::PathBuf;
use std::process::{Command, Output};

use lattice_hankel::exactalg::Scalar;
use lattice_hankel::hankel::DetRow;
use serde_json::Value;

fn lhankel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhankel")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = lhankel(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn temp_file(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("lhankel-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn seq_lists_and_formats() {
    let json = stdout(&["seq", "--ell", "3", "--t", "1", "--n", "13", "--format", "json"]);
    let terms: Vec<Scalar> = serde_json::from_str(&json).unwrap();
    let want: Vec<Scalar> = [1, 0, 1, 1, 2, 3, 6, 10, 20, 36, 72, 136, 273, 532].iter().map(|&c| Scalar::from_int(c)).collect();
    assert_eq!(terms, want);
    assert_eq!(stdout(&["seq", "--ell", "1", "--t", "t", "--n", "3"]), "1\nt\n1+t^2\n3*t+t^3\n");
    assert_eq!(stdout(&["seq", "--ell", "2", "--n", "4", "--format", "csv"]), "n,f\n0,1\n1,0\n2,2\n3,0\n4,6\n");
}

#[test]
fn seq_rejects_weighted_zero_step() {
    let out = lhankel(&["seq", "--ell", "0", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ell = 0"));
    assert_eq!(lhankel(&["seq", "--ell", "1", "--t", "1/0"]).status.code(), Some(2));
    assert_eq!(lhankel(&["seq"]).status.code(), Some(2));
}

#[test]
fn hankel_tables() {
    let plain = stdout(&["hankel", "--ell", "3", "--t", "1", "--n", "42", "--detect-period"]);
    assert!(plain.ends_with("period 14 from offset 0\n"), "{plain}");
    assert_eq!(plain.lines().count(), 43);

    let csv = stdout(&["hankel", "--ell", "2", "--t", "t", "--n", "6", "--format", "csv"]);
    let dets: Vec<&str> = csv.lines().skip(1).map(|l| l.split_once(',').unwrap().1).collect();
    assert_eq!(dets.len(), 6);
    for (got, e) in dets.iter().zip([0, 1, 2, 4, 6, 9]) {
        assert_eq!(got.parse::<Scalar>().unwrap(), "1+t".parse::<Scalar>().unwrap().pow(e));
    }
    assert_eq!(csv.lines().next(), Some("n,det"));

    let json = stdout(&["hankel", "--ell", "3", "--t", "1", "--shift", "4", "--n", "15", "--format", "json"]);
    let rows: Vec<DetRow> = json.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let want = [2, 3, 4, 0, 0, -4, -5, -6, -7, -8, 0, 0, 8, 9, 10];
    assert_eq!(rows.len(), 15);
    for (r, w) in rows.iter().zip(want) {
        assert_eq!(r.det, Scalar::from_int(w));
    }
    assert_eq!(json.lines().nth(3), Some(r#"{"n":4,"det":"0"}"#));
}

#[test]
fn hankel_period_json() {
    let json = stdout(&["hankel", "--ell", "1", "--t", "1", "--shift", "1", "--n", "18", "--detect-period", "--format", "json"]);
    let last: Value = serde_json::from_str(json.lines().last().unwrap()).unwrap();
    assert_eq!(last, serde_json::json!({"period": {"period": 6, "offset": 0}}));
}

#[test]
fn transform_orbits() {
    let json = stdout(&["transform", "--fe", &data("ell3.json"), "--format", "json"]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["outcome"]["status"], "cycle");
    assert_eq!(v["outcome"]["recurrence"], serde_json::json!({"delta": 7, "sign": -1, "factors": []}));
    assert_eq!(v["steps"].as_array().unwrap().len(), 5);

    let plain = stdout(&["transform", "--fe", &data("motzkin.json")]);
    assert!(plain.contains("cycle: F1 = F0"), "{plain}");
    assert!(plain.ends_with("recurrence: det H_n = det H_(n-1)\n"), "{plain}");

    let shifted = stdout(&["transform", "--fe", &data("ell3.json"), "--shift", "4", "--max-steps", "12"]);
    assert!(shifted.ends_with("no cycle within 12 steps\n"), "{shifted}");

    let sch = stdout(&["transform", "--fe", &data("large_schroeder.json")]);
    assert!(sch.contains("cycle: F3 = F1"), "{sch}");
}

#[test]
fn transform_reports_canonicalization_failures() {
    let bad = temp_file("bad.json", r#"{"a":{"num":[0,1]},"b":{"num":[0,1]},"c":{"num":[1]}}"#);
    let out = lhankel(&["transform", "--fe", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b(0) = 0"));
    let linear = temp_file("linear.json", r#"{"a":{"num":[0]},"b":{"num":[1]},"c":{"num":[1]}}"#);
    let out = lhankel(&["transform", "--fe", &linear]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a = 0"));
    assert_eq!(lhankel(&["transform", "--fe", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn lgv_configurations() {
    assert_eq!(stdout(&["lgv", "--config", &data("hankel4.json")]), "signed sum:  1\ndeterminant: 1\nMATCH\n");
    let v: Value = serde_json::from_str(&stdout(&["lgv", "--config", &data("hankel4_shift1.json"), "--format", "json"])).unwrap();
    assert_eq!(v["match"], true);
    assert_eq!(v["det"].as_str().unwrap().parse::<Scalar>().unwrap(), "1-3*t^2+t^4".parse::<Scalar>().unwrap());
    let point = temp_file("point.json", r#"{"initials":[[0,0]],"terminals":[[0,0]],"ell":1,"t":"t"}"#);
    assert_eq!(stdout(&["lgv", "--config", &point, "--format", "csv"]), "signed_sum,det,match\n1,1,true\n");
}

#[test]
fn lgv_budget_and_bad_config() {
    let out = lhankel(&["lgv", "--config", &data("hankel4_shift1.json"), "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let bad = temp_file("order.json", r#"{"initials":[[0,0],[1,0]],"terminals":[[0,0],[1,0]],"ell":1,"t":"1"}"#);
    assert_eq!(lhankel(&["lgv", "--config", &bad]).status.code(), Some(2));
    let missing = temp_file("missing.json", r#"{"initials":[[0,0]],"terminals":[[0,0]]}"#);
    assert_eq!(lhankel(&["lgv", "--config", &missing]).status.code(), Some(2));
}

#[test]
fn verify_filters() {
    let one = stdout(&["verify", "--only", "prop2"]);
    assert_eq!(one.lines().count(), 2);
    assert!(one.starts_with("[PASS]  4 prop2"), "{one}");
    let csv = stdout(&["verify", "--only", "5", "--format", "csv"]);
    assert!(csv.starts_with("id,name,passed,seconds\n5,prop3,true,"), "{csv}");
    let json: Value = serde_json::from_str(&stdout(&["verify", "--only", "delannoy", "--format", "json"])).unwrap();
    assert_eq!(json[0]["passed"], true);
    assert_eq!(lhankel(&["verify", "--only", "prop9"]).status.code(), Some(2));
}

#[test]
fn verify_everything() {
    let all = stdout(&["verify"]);
    assert!(all.lines().last().unwrap().starts_with("15 of 15 criteria passed"), "{all}");
}

#[test]
fn output_is_deterministic() {
    let args = ["transform", "--fe", &data("large_schroeder.json"), "--format", "json"];
    assert_eq!(lhankel(&args).stdout, lhankel(&args).stdout);
    let args = ["hankel", "--ell", "2", "--t", "t", "--shift", "1", "--n", "8"];
    assert_eq!(lhankel(&args).stdout, lhankel(&args).stdout);
}
