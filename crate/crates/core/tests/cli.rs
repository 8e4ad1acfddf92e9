use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochgeo"))
        .args(args)
        .env_remove("BLOCHGEO_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV table, header first.
fn rows(args: &[&str]) -> Vec<Vec<String>> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(stdout(args).as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn metric_table_shape() {
    let t = rows(&["metric", "--id", "fisher-hus", "--grid", "0.1:0.9:9"]);
    assert_eq!(t[0], ["r", "A", "B", "t", "f"]);
    assert_eq!(t.len(), 10);
    assert_eq!(t[1][0], "0.1");
    assert_eq!(t[9][0], "0.9");
}

#[test]
fn bures_tangential_is_half() {
    for row in &rows(&["metric", "--id", "bures", "--grid", "0.1:0.9:5"])[1..] {
        assert_eq!(row[2], "1");
        let r = num(&row[0]);
        assert!((num(&row[1]) - 1.0 / (1.0 - r * r)).abs() < 1e-11);
    }
}

#[test]
fn escort_metric_matches_closed_form() {
    let t = rows(&["metric", "--id", "escort", "--q", "3", "--at", "0.5"]);
    // Radial and tangential components for q = 3 at r = 1/2.
    assert!((num(&t[1][1]) - 1.76).abs() < 1e-10);
    assert!((num(&t[1][2]) - 2.4).abs() < 1e-10);
}

#[test]
fn twelve_significant_digits() {
    let t = rows(&["metric", "--id", "bures", "--at", "0.5"]);
    assert_eq!(t[1][1], "1.33333333333");
}

#[test]
fn kl_value() {
    let t = rows(&["kl", "--p", "bures", "--q", "hus"]);
    assert_eq!(t[0], ["p", "q", "kl"]);
    assert!((num(&t[1][2]) - 0.130845).abs() < 1e-4);
}

#[test]
fn noninformativity_verdict() {
    let t = rows(&[
        "kl",
        "--p",
        "bures",
        "--q",
        "hus",
        "--scheme",
        "octahedron",
        "--m",
        "1",
    ]);
    assert_eq!(t[1][8], "p_more_noninformative");
    assert!((num(&t[1][5]) - 0.091231).abs() < 1e-4);
}

#[test]
fn redundancy_constants() {
    let gks = rows(&["redundancy", "--prior", "gks"]);
    assert!((num(&gks[1][1]) + 1.77062).abs() < 1e-5);
    assert!(num(&gks[1][3]) < 1e-6);
    let classical = rows(&["redundancy", "--classical"]);
    assert!((num(&classical[1][1]) + 3.92499).abs() < 1e-5);
    assert!(classical[1][2].starts_with("1.5*log(N) - 3.92"));
    let mc = rows(&["redundancy", "--prior", "mc"]);
    assert!((num(&mc[1][1]) + 2.15667).abs() < 1e-5);
}

#[test]
fn curvature_commands() {
    for row in &rows(&["curvature", "--id", "bures", "--grid", "0.1:0.9:5"])[1..] {
        assert!((num(&row[1]) - 6.0).abs() < 1e-8);
        assert!(row[3].contains("constant curvature 6"));
    }
    let t = rows(&["curvature", "--id", "fisher-hus", "--at", "0"]);
    assert_eq!(t[1][1], "0");
    assert!(t[1][3].contains("flat"));
}

#[test]
fn distance_to_pure_state() {
    let t = rows(&["distance", "--id", "fisher-hus", "--at", "1.0"]);
    assert!((num(&t[1][1]) - 0.689685).abs() < 1e-5);
    let m = rows(&["distance", "--id", "monge", "--at", "1.0"]);
    assert!((num(&m[1][1]) - std::f64::consts::PI / 8.0).abs() < 1e-11);
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["metric", "--id", "nope", "--at", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["metric", "--id", "escort", "--at", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["metric", "--id", "bures", "--grid", "0:1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["metric", "--id", "bures"]).status.code(), Some(2));
    assert_eq!(
        run(&["kl", "--p", "gauss", "--q", "hus"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["distance", "--id", "fisher-gauss", "--at", "1"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["curvature", "--id", "bures", "--at", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn json_and_out_file() {
    let path = std::env::temp_dir().join(format!("blochgeo-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let out = run(&[
        "goldens",
        "--criterion",
        "1",
        "--format",
        "json",
        "--out",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["pass"], serde_json::Value::Bool(true));
    assert_eq!(rows[0]["criterion"], serde_json::json!(1.0));
}

#[test]
fn tolerance_env_reaches_the_integrators() {
    let out = Command::new(env!("CARGO_BIN_EXE_blochgeo"))
        .args(["goldens", "--criterion", "6"])
        .env("BLOCHGEO_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gating row(s) failed"));
}

#[test]
fn output_is_deterministic() {
    let args = ["metric", "--id", "mc", "--grid", "0:0.99:17"];
    assert_eq!(stdout(&args), stdout(&args));
}
