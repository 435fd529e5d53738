//! End-to-end runs of the `painleve` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn painleve(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_painleve"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("PII_OUT_DIR")
        .output()
        .unwrap()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().find(|l| !l.starts_with('#')).unwrap().to_owned()
}

#[test]
fn reference_mode_writes_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = painleve(&["--mode", "reference", "--grid", "1025"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("reference.csv");
    let text = fs::read_to_string(&path).unwrap();
    let e0: f64 = text.lines().find_map(|l| l.strip_prefix("# e0=")).unwrap().parse().unwrap();
    assert!((e0 - 4.180).abs() <= 1e-3);
    assert!(text.contains("# type=A"));
    assert!(text.contains("# residual="));
    assert_eq!(header(&path), "x,E,Eprime");
    assert_eq!(rows(&path).len(), 1025);
}

#[test]
fn series_and_extraordinary_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("case2.cfg");
    fs::write(&cfg, "# second case\nnu = 0.1\nmu = -0.5\nn_max = 20\ngrid = 513\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let out = painleve(&["--config", cfg, "--mode", "series"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let series = dir.path().join("series.csv");
    assert_eq!(header(&series), "n,log10_delta");
    assert_eq!(rows(&series).len(), 20);
    let terms = dir.path().join("term_profiles.csv");
    assert_eq!(header(&terms), "n,x,En,Enprime");
    assert_eq!(rows(&terms).len(), 20 * 513);

    let out = painleve(&["--config", cfg, "--mode", "extraordinary"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let abc = dir.path().join("abc_sequence.csv");
    assert_eq!(header(&abc), "n,a_n,b_n,C_n,beta_n,gamma_n,valid");
    let last = rows(&abc).pop().unwrap();
    let v: Vec<f64> = last[1..4].iter().map(|s| s.parse().unwrap()).collect();
    for (got, want) in v.iter().zip([1.645, 3.554, 0.714]) {
        assert!((got - want).abs() <= 1e-3, "{got} vs {want}");
    }
    let y = dir.path().join("y_profiles.csv");
    assert_eq!(header(&y), "n,z,y");
    let y_rows = rows(&y);
    assert_eq!(y_rows.len(), 21 * 513);
    assert_eq!(y_rows[0][0], "0");
}

#[test]
fn direct_mode_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = painleve(&["--nu", "0.1", "--mu", "-0.5", "--mode", "direct", "--n-max", "25", "--grid", "513"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let path = dir.path().join("direct.csv");
    assert_eq!(header(&path), "n,sup_discrepancy,verdict");
    let r = rows(&path);
    assert_eq!(r.len(), 25);
    assert_eq!(r[24][2], "convergent");
}

#[test]
fn sweep_is_deterministic_and_hits_anchor() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--mode", "sweep", "--grid", "513", "--sweep-from", "-1", "--sweep-to", "1", "--sweep-step", "0.5"];
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert_eq!(painleve(&args, &a).status.code(), Some(0));
    let mut one_worker = args.to_vec();
    one_worker.extend(["--workers", "1"]);
    assert_eq!(painleve(&one_worker, &b).status.code(), Some(0));
    let (fa, fb) = (a.join("sweep.csv"), b.join("sweep.csv"));
    assert_eq!(fs::read(&fa).unwrap(), fs::read(&fb).unwrap());
    assert_eq!(header(&fa), "mu,a,b,C,e0,e1,converged");
    let r = rows(&fa);
    assert_eq!(r.len(), 5);
    let zero = &r[2];
    assert_eq!(zero[0].parse::<f64>().unwrap(), 0.0);
    assert!((zero[1].parse::<f64>().unwrap() - 0.575).abs() < 1e-3);
    assert_eq!(zero[3].parse::<f64>().unwrap(), 0.0);
    assert!(r.iter().all(|row| row[6] == "1"));
}

#[test]
fn config_errors_are_json_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = painleve(&["--grid", "256"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // soft-range warnings may precede the record
    let stderr = String::from_utf8(out.stderr).unwrap();
    let rec: serde_json::Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(rec["error"], "validation");
    assert_eq!(rec["exit_code"], 2);

    let out = painleve(&["--sigma", "1.5"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_painleve"))
        .args(["--grid", "257", "--mu", "0"])
        .env("PII_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("reference.csv")).unwrap();
    assert!(text.contains("# type=null"));
}
