use std::fs;
use std::process::{Command, Output};

use mertens_spectra::builder::MatrixKind;
use mertens_spectra::io::{read_matrix_dump, SWEEP_HEADER};
use mertens_spectra::builder::MertensFamily;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mertens-spectra"));
    c.env_remove("MERTENS_SPECTRA_MAX_DIM");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mertens_prints_value() {
    let o = run(&["mertens", "--n", "100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "1");
    assert_eq!(stdout(&run(&["mertens", "--n", "0"])).trim(), "0");
}

#[test]
fn mertens_respects_sieve_limit() {
    let o = run(&["mertens", "--n", "1000", "--sieve-limit", "100"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn verify_n4_succeeds() {
    let o = run(&["verify", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for check in ["I1-exact", "I1-float", "I2", "I3", "O1", "E1", "B1", "B2", "W1", "SYM"] {
        assert!(text.contains(check), "missing {check} in {text}");
    }
    assert!(!text.contains("FAIL"));
}

#[test]
fn verify_rejects_non_square() {
    assert_eq!(run(&["verify", "--n", "5"]).status.code(), Some(1));
}

#[test]
fn verify_range_keystone() {
    let o = run(&["verify", "--k-min", "2", "--k-max", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verified 39 value(s) of n, 0 failing"));
}

#[test]
fn spectrum_usage_and_json() {
    let o = run(&["spectrum", "--n", "0", "--matrix", "M"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.trim().lines().count(), 1);

    let o = run(&["spectrum", "--n", "4", "--matrix", "Kinv"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["kind"], "Kinv");
    let eig: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(eig.len(), 3);
    assert!((eig[0] - 2.170).abs() < 0.01);
    assert!(v["residual_max"].as_f64().unwrap() < 1e-12);
}

#[test]
fn spectrum_eigvec_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("vecs.txt");
    let o = run(&["spectrum", "--n", "100", "--matrix", "M", "--top", "8", "--eigvecs", "--eigvecs-out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "# mertens-eigvecs v1 n=100 kind=M dim=19 count=8");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.split(',').count() == 19));
}

#[test]
fn matrix_dump_round_trips_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m16.txt");
    let o = run(&["matrix", "--kind", "M", "--n", "16", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dump = read_matrix_dump(fs::read(&path).unwrap().as_slice()).unwrap();
    assert_eq!(dump.kind, MatrixKind::M);
    assert_eq!(dump.n, 16);
    let direct = MertensFamily::<f64>::new(16, 4001).unwrap().mertens_matrix().unwrap();
    let same_bits = dump.matrix.as_slice().iter().zip(direct.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits());
    assert!(same_bits);
}

#[test]
fn matrix_kinds_and_errors() {
    for kind in ["U", "Uk", "T", "D", "K", "Kinv", "M"] {
        let o = run(&["matrix", "--n", "9", "--kind", kind]);
        assert_eq!(o.status.code(), Some(0), "{kind}");
        assert!(stdout(&o).starts_with(&format!("# mertens-matrix v1 kind={kind} n=9 dim=5\n")));
    }
    assert_eq!(run(&["matrix", "--n", "10", "--kind", "Uk"]).status.code(), Some(1));
    // the S-indexed family is defined for every n
    assert_eq!(run(&["matrix", "--n", "10", "--kind", "U"]).status.code(), Some(0));
}

#[test]
fn dim_cap_from_environment() {
    let o = bin().args(["matrix", "--n", "100", "--kind", "U"]).env("MERTENS_SPECTRA_MAX_DIM", "10").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8(o.stderr).unwrap().contains("cap 10"));
}

#[test]
fn sweep_csv_layout_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let base = ["sweep", "--k-min", "2", "--k-max", "30", "--matrix", "Kinv"];
    let o1 = bin().args(base).args(["--workers", "1", "--out", a.to_str().unwrap()]).output().unwrap();
    let o2 = bin().args(base).args(["--workers", "5", "--out", b.to_str().unwrap()]).output().unwrap();
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());

    let text = String::from_utf8(ta).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "# config: sweep --k-min 2 --k-max 30 --matrix Kinv");
    assert!(lines[1].starts_with("# version: mertens-spectra "));
    assert_eq!(lines[2], SWEEP_HEADER);
    assert_eq!(lines.len(), 3 + 29);
    // k = 2 has only three eigenvalues
    let first: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(&first[..3], &["2", "4", "Kinv"]);
    assert_eq!(&first[6..11], &["NA"; 5]);
    assert_eq!(*first.last().unwrap(), "ok");
}

#[test]
fn sweep_probe_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.csv");
    let o = run(&["sweep", "--k-min", "10", "--k-max", "25", "--matrix", "Kinv", "--probe", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["count"], 16);
    assert!(v["alpha"].as_f64().unwrap().is_finite());
}

#[test]
fn sweep_rejects_bad_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let o = run(&["sweep", "--k-min", "1", "--k-max", "3", "--matrix", "M", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fit_curve_csv() {
    let o = run(&["fit-curve", "--n-min", "16", "--n-max", "10000", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# config: fit-curve"));
    assert_eq!(lines[2], "n,overlay,reference_term");
    assert_eq!(lines.len(), 8);
    assert!(lines[3].starts_with("16,"));
    assert_eq!(run(&["fit-curve", "--n-min", "10", "--n-max", "100", "--points", "3"]).status.code(), Some(1));
}

#[test]
fn kernel_reports() {
    let o = run(&["kernel-hs", "--epsilon", "0.25,0.4", "--cells", "64"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(3).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][1], "NA");
    let hs: f64 = rows[0][2].parse().unwrap();
    let bound: f64 = rows[0][3].parse().unwrap();
    assert!(hs <= bound);

    let o = run(&["kernel-distance", "--eps-list", "0.1,0.2", "--delta-list", "0.2,0.1", "--cells", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().nth(2).unwrap(), "epsilon,delta,hs_norm,bound,two_grid_error");
    assert_eq!(text.lines().count(), 3 + 4);
    assert_eq!(run(&["kernel-hs", "--epsilon", "0.7"]).status.code(), Some(1));
}
