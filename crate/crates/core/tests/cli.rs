use std::path::Path;
use std::process::{Command, Output};

use decaylab::growth::GrowthFunction;
use decaylab::semigroup::{DecayReport, ReportKind};
use decaylab::specialfn::KernelH;
use decaylab::witness::{optimize_r, Variant};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decaylab")).args(args).output().unwrap()
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn witness_matches_library_optimum() {
    let out = run(&["witness", "--m", "poly:beta=2", "--t", "1000", "--variant", "plain"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["admissible"], true);
    let m = GrowthFunction::polynomial(2.0).unwrap();
    let cert = optimize_r(&m, None, 1000.0, std::f64::consts::PI / 6.0, Variant::Plain, 1e6).unwrap();
    assert_eq!(v["N"].as_f64().unwrap(), cert.n);
    assert_eq!(v["R_star"].as_f64().unwrap(), cert.r_star);
}

#[test]
fn semigroup_artifacts_are_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        let out = run(&["semigroup", "--m", "poly:beta=2", "--t-min", "100", "--t-max", "1e5", "--n-t", "9", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["semigroup_mult.csv", "semigroup_mult.gp", "semigroup_mult.json"] {
        assert_eq!(read(a.path(), name), read(b.path(), name), "{name}");
    }
    let m = GrowthFunction::polynomial(2.0).unwrap();
    let report = DecayReport::from_csv(&a.path().join("semigroup_mult.csv"), ReportKind::Multiplication, &m).unwrap();
    assert_eq!(report.t.len(), 9);
    assert!(report.measured.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn sweep_and_config_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("sweep.conf");
    std::fs::write(&conf, "m = poly:beta=2\nt_min = 100\nt_max = 1e4\nn_t = 5\n").unwrap();
    let from_file = run(&["sweep", "--config", conf.to_str().unwrap()]);
    let from_flags = run(&["sweep", "--m", "poly:beta=2", "--t-min", "100", "--t-max", "1e4", "--n-t", "5"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(from_file.stdout, from_flags.stdout);

    let out = run(&["sweep", "--config", conf.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(read(dir.path(), "sweep.csv")).unwrap();
    assert!(csv.starts_with("t,R_star,N,rate_inverse,ratio,admissible,explicit_admissible\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn specialfn_writes_loadable_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["specialfn", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let k = KernelH::load(&dir.path().join("kernel_h.tsv")).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(k.t0, v["t0"].as_f64().unwrap());
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["invert", "--m", "poly:beta=2", "--t", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--m", "poly:beta=2", "--n-t", "1"]).status.code(), Some(2));
    assert_eq!(run(&["witness", "--m", "poly:beta=2", "--t", "1000", "--r-max", "2"]).status.code(), Some(1));
    let inv = run(&["invert", "--m", "poly:beta=2", "--t", "100"]);
    assert_eq!(inv.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&inv.stdout).unwrap();
    assert!((v["s"].as_f64().unwrap() - 9.0).abs() < 1e-9);
}
