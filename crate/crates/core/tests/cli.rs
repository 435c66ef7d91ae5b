//! End-to-end tests of the `zngeom` binary: flag parsing, the point-list
//! file interface, output formats, and exit-status policy.

use std::process::{Command, Output};

fn zngeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zngeom"))
        .args(args)
        .output()
        .expect("spawn zngeom")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn factor_reports_tau_and_gamma() {
    let out = zngeom(&["factor", "45"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "45,3^2*5,6,3,0.1.0");
}

#[test]
fn factor_rejects_even_modulus() {
    let out = zngeom(&["factor", "10"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}

#[test]
fn product_set_of_full_line() {
    let out = zngeom(&[
        "product-set",
        "--n",
        "3",
        "--d",
        "1",
        "--generator",
        "full",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains("0 1 2"), "{row}");
    assert!(row.contains("true"), "{row}"); // covers the ring
}

#[test]
fn distance_set_from_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.txt");
    std::fs::write(&path, "n=5 d=2\n0 0\n1 2\n").unwrap();
    let arg = format!("file:{}", path.display());
    let out = zngeom(&[
        "distance-set",
        "--n",
        "5",
        "--d",
        "2",
        "--generator",
        &arg,
    ]);
    assert!(out.status.success());
    // ||(0,0)-(1,2)|| = 5 = 0, so the distance set is {0}
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().contains(",1,"), "{text}");
}

#[test]
fn point_file_with_duplicates_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.txt");
    std::fs::write(&path, "n=5 d=1\n3\n3\n").unwrap();
    let arg = format!("file:{}", path.display());
    let out = zngeom(&["mu", "--n", "5", "--d", "1", "--generator", &arg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate"));
}

#[test]
fn mu_histogram_dump_totals() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("hist.csv");
    let out = zngeom(&[
        "mu",
        "--n",
        "3",
        "--d",
        "1",
        "--generator",
        "full",
        "--histogram-out",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    // full line over Z_3: counts 5, 2, 2
    assert_eq!(text, "trial,t,count\n0,0,5\n0,1,2\n0,2,2\n");
}

#[test]
fn stars_exact_and_sampled() {
    let out = zngeom(&[
        "stars", "--n", "5", "--d", "2", "--generator", "full", "--k", "1", "--metric", "dot",
        "--mode", "exact",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let estimate: f64 = row.split(',').nth(9).unwrap().parse().unwrap();
    assert!((estimate - 121.0 / 25.0).abs() < 1e-12, "{row}");

    let out = zngeom(&[
        "stars", "--n", "9", "--d", "2", "--size", "30", "--seed", "4", "--k", "1", "--mode",
        "sampled", "--budget", "20",
    ]);
    assert!(out.status.success());
}

#[test]
fn mk_guaranteed_bound_reports_hold() {
    let out = zngeom(&[
        "mk", "--n", "9", "--d", "2", "--size", "40", "--seed", "9", "--k", "1", "--metric",
        "distance", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["holds"], serde_json::Value::Bool(true));
    assert_eq!(rows[0]["guaranteed"], serde_json::Value::Bool(true));
}

#[test]
fn simplices_json_round_trips() {
    let out = zngeom(&[
        "simplices", "--n", "5", "--d", "2", "--generator", "full", "--k", "1", "--metric",
        "distance", "--mode", "exact", "--format", "json",
    ]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["distinct"], serde_json::json!(5));
    assert_eq!(rows[0]["density"].as_f64().unwrap(), 1.0);
}

#[test]
fn sweep_empty_grid_is_header_only() {
    // omitted --sizes means an empty grid
    let out = zngeom(&["sweep", "--n", "9", "--d", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("n,d,size,trial,"));
}

#[test]
fn verify_small_suite_passes() {
    let out = zngeom(&[
        "verify",
        "--n-list",
        "3",
        "--d-list",
        "1,2",
        "--instances",
        "3",
        "--seed",
        "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3); // header + 2 cells
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
}

#[test]
fn thresholds_with_ell_requires_prime_power() {
    let out = zngeom(&["thresholds", "15", "3", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = zngeom(&["thresholds", "9", "5", "1", "--ell", "2", "--size", "35000"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("prime_power_ring_coverage"));
    assert!(text.contains("star_simplex_size"));
}

#[test]
fn unknown_generator_is_rejected() {
    let out = zngeom(&["mu", "--n", "9", "--d", "2", "--generator", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_even_modulus() {
    let out = zngeom(&["verify", "--n-list", "4", "--d-list", "1", "--instances", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("odd"));
}
