#![allow(clippy::excessive_precision)]

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ginibre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ginibre"))
        .args(args)
        .env_remove("WORKERS")
        .output()
        .expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let o = ginibre(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn code(args: &[&str]) -> i32 {
    ginibre(args).status.code().unwrap()
}

fn csv_rows(path: &Path) -> (String, Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_owned();
    let cols = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    (header, cols, rows)
}

#[test]
fn rate_outputs() {
    let v = json_out(&["rate", "--beta", "2", "--t", "1.3"]);
    // mpmath: (1.3^2 - 2 ln 1.3 - 1)
    assert!((v["rate"].as_f64().unwrap() - 0.165_271_471_065_017_9).abs() < 1e-15);
    assert_eq!(v["finite"], true);
    let v = json_out(&["rate", "--beta", "1", "--t", "0.9"]);
    assert_eq!(v["finite"], false);
    assert!(v["rate"].is_null());
}

#[test]
fn invalid_configs_exit_2_with_one_line() {
    for args in [
        &["rate", "--beta", "3", "--t", "1"][..],
        &[
            "expected-count",
            "--ensemble",
            "real",
            "--stat",
            "real",
            "--n",
            "2",
            "--t",
            "1",
        ],
        &[
            "exact-tail",
            "--ensemble",
            "complex",
            "--stat",
            "radius",
            "--n",
            "0",
            "--t",
            "1",
        ],
        &[
            "exact-tail",
            "--ensemble",
            "real",
            "--stat",
            "radius",
            "--n",
            "5",
            "--t",
            "1",
        ],
        &[
            "tail-bracket",
            "--ensemble",
            "complex",
            "--stat",
            "real",
            "--n",
            "5",
            "--t",
            "1",
        ],
        &[
            "ldp-curve",
            "--ensemble",
            "complex",
            "--stat",
            "radius",
            "--t",
            "0.9",
            "--n-list",
            "10",
        ],
        &[
            "ldp-curve",
            "--ensemble",
            "real",
            "--stat",
            "real",
            "--t",
            "1.3",
            "--n-list",
            "10",
        ],
        &["gumbel", "--n", "100"],
        &[
            "sample",
            "--ensemble",
            "real",
            "--n",
            "2000",
            "--trials",
            "6000",
        ],
        &["saturn", "--n", "10", "--trials", "5", "--threshold", "0.5"],
        &["nonsense"],
    ] {
        let o = ginibre(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
}

#[test]
fn exact_tail_small_n() {
    let v = json_out(&[
        "exact-tail",
        "--ensemble",
        "complex",
        "--stat",
        "radius",
        "--n",
        "2",
        "--t",
        "1",
    ]);
    // mpmath: 1 - (1 - e^-2)(1 - 3e^-2)
    assert!((v["p"].as_f64().unwrap() - 0.486_394_216_280_248_2).abs() < 1e-12);
    assert_eq!(v["kind"], "exact");
    let p = v["p"].as_f64().unwrap();
    let lp = v["log_p"].as_f64().unwrap();
    assert!((p - lp.exp()).abs() <= 1e-15 * p);
}

#[test]
fn expected_count_closed_form() {
    let v = json_out(&[
        "expected-count",
        "--ensemble",
        "complex",
        "--stat",
        "radius",
        "--n",
        "2",
        "--t",
        "1",
    ]);
    assert!((v["value"].as_f64().unwrap() - 0.541_341_132_946_450_77).abs() < 1e-14);
    assert_eq!(v["route"], "closed_form");
    let v = json_out(&[
        "expected-count",
        "--ensemble",
        "real",
        "--stat",
        "real",
        "--n",
        "20",
        "--t",
        "1.1",
    ]);
    assert_eq!(v["route"], "quadrature");
    assert!(v["ln_truncation"].as_f64().is_some());
}

#[test]
fn json_round_trips() {
    let o = ginibre(&[
        "tail-bracket",
        "--ensemble",
        "real",
        "--stat",
        "real",
        "--n",
        "50",
        "--t",
        "1.2",
    ]);
    let text = String::from_utf8(o.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), text.trim_end());
    let lo = v["lower"]["p"].as_f64().unwrap();
    assert!(lo <= v["upper"]["p"].as_f64().unwrap());
}

#[test]
fn ldp_curve_gap_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ldp.csv");
    let v = json_out(&[
        "ldp-curve",
        "--ensemble",
        "complex",
        "--stat",
        "radius",
        "--t",
        "1.3",
        "--n-list",
        "100,200,400",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert_eq!(v["gap_decreasing"], true);
    let (header, cols, rows) = csv_rows(&out);
    assert!(header.starts_with("# {") && header.contains("\"master_seed\""));
    assert_eq!(
        cols,
        ["n", "minus_log_p_over_n", "rate_target", "gap", "route"]
    );
    assert_eq!(rows.len(), 3);
    let gaps: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2]);
}

#[test]
fn mdp_and_gumbel_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mdp.csv");
    json_out(&[
        "mdp-scaling",
        "--ensemble",
        "complex",
        "--stat",
        "radius",
        "--t-grid",
        "1,2",
        "--n-list",
        "1000",
        "-o",
        out.to_str().unwrap(),
    ]);
    let (_, cols, rows) = csv_rows(&out);
    assert_eq!(cols, ["n", "t", "d", "value", "target", "regime_ok"]);
    assert_eq!(rows[1][4], "-8.0");
    let out = dir.path().join("g.csv");
    let v = json_out(&["gumbel", "--n", "10000", "-o", out.to_str().unwrap()]);
    let ks = v["ks_stat"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&ks));
    assert!(v["location_fit"].is_f64() && v["scale_fit"].is_f64());
    let (_, cols, rows) = csv_rows(&out);
    assert_eq!(cols, ["grid_t", "empirical_or_exact_cdf", "limit_cdf"]);
    let at0 = rows.iter().find(|r| r[0] == "0.0").unwrap();
    assert_eq!(at0[2].parse::<f64>().unwrap(), (-1f64).exp());
}

fn run_to(args: &[&str], out: &Path) -> Vec<u8> {
    let mut a = args.to_vec();
    a.extend(["-o", out.to_str().unwrap()]);
    let o = ginibre(&a);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn outputs_do_not_depend_on_workers() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.csv");
    for args in [
        &[
            "saturn",
            "--n",
            "40",
            "--trials",
            "60",
            "--threshold",
            "1.2",
            "--seed",
            "42",
        ][..],
        &[
            "mc",
            "--ensemble",
            "real",
            "--stat",
            "real",
            "--n",
            "30",
            "--t",
            "1.1",
            "--trials",
            "80",
            "--seed",
            "9",
        ],
        &[
            "sample",
            "--ensemble",
            "complex",
            "--n",
            "10",
            "--trials",
            "70",
            "--seed",
            "5",
        ],
    ] {
        let one = run_to(&[args, &["--workers", "1"]].concat(), &p);
        let eight = run_to(&[args, &["--workers", "8"]].concat(), &p);
        assert_eq!(one, eight, "{args:?}");
        let again = run_to(&[args, &["--workers", "3"]].concat(), &p);
        assert_eq!(one, again);
    }
}

#[test]
fn workers_env_is_read_and_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_ginibre"))
        .args(["saturn", "--n", "10", "--trials", "5"])
        .env("WORKERS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_ginibre"))
        .args(["saturn", "--n", "10", "--trials", "5", "--workers", "2"])
        .env("WORKERS", "many")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn sample_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    run_to(
        &[
            "sample",
            "--ensemble",
            "complex",
            "--n",
            "12",
            "--trials",
            "5",
        ],
        &p,
    );
    let (_, cols, rows) = csv_rows(&p);
    assert_eq!(cols, ["trial", "re", "im", "is_real"]);
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| r[3] == "0"));
    run_to(
        &["sample", "--ensemble", "real", "--n", "15", "--trials", "7"],
        &p,
    );
    let (_, _, rows) = csv_rows(&p);
    for trial in 0..7 {
        let mine: Vec<_> = rows.iter().filter(|r| r[0] == trial.to_string()).collect();
        assert_eq!(mine.len(), 15);
        // odd n always has a real eigenvalue
        assert!(mine.iter().any(|r| r[3] == "1"));
        assert!(mine.iter().filter(|r| r[3] == "1").all(|r| r[2] == "0.0"));
    }
    assert_eq!(
        code(&[
            "sample",
            "--ensemble",
            "real",
            "--n",
            "15",
            "--trials",
            "7",
            "--row-cap",
            "100"
        ]),
        2
    );
}

#[test]
fn saturn_summary_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.csv");
    let o = ginibre(&[
        "saturn",
        "--n",
        "30",
        "--trials",
        "50",
        "--threshold",
        "1.05",
        "-o",
        p.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let (r, c, b) = (
        v["real_exceed"].as_u64().unwrap(),
        v["complex_exceed"].as_u64().unwrap(),
        v["both"].as_u64().unwrap(),
    );
    assert!(b <= r.min(c));
    let (_, cols, rows) = csv_rows(&p);
    assert_eq!(
        cols,
        ["trial", "real_max", "complex_max_modulus", "rightmost"]
    );
    assert_eq!(rows.len(), 50);
    let counted = rows
        .iter()
        .filter(|row| row[1].parse::<f64>().is_ok_and(|x| x >= 1.05))
        .count() as u64;
    assert_eq!(counted, r);
}

#[test]
fn json_format_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("l.json");
    json_out(&[
        "ldp-curve",
        "--ensemble",
        "complex",
        "--stat",
        "radius",
        "--t",
        "1.2",
        "--n-list",
        "50,60",
        "--format",
        "json",
        "-o",
        p.to_str().unwrap(),
    ]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["command"], "ldp-curve");
    assert_eq!(v["rows"][0]["route"], "exact");
}
