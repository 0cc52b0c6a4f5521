use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hermitian_curvature::io::TensorFile;
use hermitian_curvature::realization::{levi_civita_curvature, random_kaehler_jet, MetricJet};
use hermitian_curvature::{HermitianModel, Rational, Scalar, Tensor3, Tensor4};
use tempfile::TempDir;

fn hcurv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hcurv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dims_rows_and_totals() {
    let o = hcurv(&["dims", "--n", "2"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("total 20 ; curvature space 20"), "{out}");
    assert!(out.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["W7", "2"]));
    assert!(out.contains("checksum: PASS"));

    let o = hcurv(&["dims", "--n", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("total 105 ; curvature space 105"));
}

#[test]
fn help_and_usage_exit_codes() {
    assert_eq!(code(&hcurv(&["--help"])), 0);
    assert_eq!(code(&hcurv(&["--version"])), 0);
    assert_eq!(code(&hcurv(&["dims", "--bogus"])), 64);
    assert_eq!(code(&hcurv(&["dims", "--n", "1"])), 64);
    assert_eq!(code(&hcurv(&["decompose", "/nonexistent/file.json"])), 64);
    assert_eq!(code(&hcurv(&["basis", "--n", "2", "--component", "W5"])), 64);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "bad.json");
    std::fs::write(&p, "{\"format\": \"something else\"}").unwrap();
    assert_eq!(code(&hcurv(&["gray-check", s(&p)])), 64);

    // Not a curvature tensor: violates skew-symmetry.
    let m = HermitianModel::new(2).unwrap();
    let mut t = Tensor4::<Rational>::zeros(4);
    t.set(0, 1, 0, 1, Rational::from_i64(1));
    let mut f = TensorFile::for_scalar::<Rational>(&m);
    f.push_tensor4("A", &t);
    f.write(&p).unwrap();
    assert_eq!(code(&hcurv(&["decompose", s(&p)])), 64);
}

#[test]
fn gray_check_on_w3_basis_tensor() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "w3.json");
    assert_eq!(code(&hcurv(&["basis", "--n", "2", "--component", "W3", "-o", s(&p)])), 0);
    let o = hcurv(&["gray-check", s(&p)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "Gray: PASS, defect norm 0");

    let o = hcurv(&["gray-check", s(&p), "--scalar", "float"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("Gray: PASS"));
}

#[test]
fn w7_tensor_is_not_realizable() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "w7.json");
    assert_eq!(code(&hcurv(&["basis", "--n", "2", "--component", "W7", "-o", s(&p)])), 0);
    let o = hcurv(&["gray-check", s(&p)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("Gray: FAIL"));
    let o = hcurv(&["realize", s(&p)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("W7"));
}

#[test]
fn realize_then_curvature_round_trip() {
    let dir = TempDir::new().unwrap();
    let a = path(&dir, "w9.json");
    let r = path(&dir, "jet.json");
    assert_eq!(code(&hcurv(&["basis", "--n", "2", "--component", "W9", "-o", s(&a)])), 0);
    assert_eq!(code(&hcurv(&["realize", s(&a), "-o", s(&r)])), 0);
    let realized = TensorFile::read(&r).unwrap();
    assert_eq!(realized.report.as_ref().unwrap()["passed"], true);

    let c = path(&dir, "curv.json");
    assert_eq!(code(&hcurv(&["curvature", s(&r), "-o", s(&c)])), 0);
    let original = TensorFile::read(&a).unwrap().tensor4::<Rational>("A").unwrap();
    let recomputed = TensorFile::read(&c).unwrap().tensor4::<Rational>("A").unwrap();
    assert_eq!(original, recomputed);
}

#[test]
fn realize_rejects_float_mode() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "w3.json");
    hcurv(&["basis", "--n", "2", "--component", "W3", "-o", s(&p)]);
    assert_eq!(code(&hcurv(&["realize", s(&p), "--scalar", "float"])), 64);
}

#[test]
fn decompose_zero_tensor() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "zero.json");
    let m = HermitianModel::new(3).unwrap();
    let mut f = TensorFile::for_scalar::<Rational>(&m);
    f.push_tensor4("A", &Tensor4::<Rational>::zeros(6));
    f.write(&p).unwrap();

    let o = hcurv(&["decompose", s(&p)]);
    assert_eq!(code(&o), 0);
    let out = TensorFile::from_json(&stdout(&o)).unwrap();
    for t in &out.tensors {
        assert!(t.data.iter().all(|v| v == "0"), "{} has nonzero entries", t.name);
    }
    assert_eq!(out.tensors.len(), 11);
}

#[test]
fn decompose_parts_sum_back() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "w8.json");
    hcurv(&["basis", "--n", "2", "--component", "W8", "--index", "3", "-o", s(&p)]);
    let o = hcurv(&["decompose", s(&p)]);
    assert_eq!(code(&o), 0);
    let out = TensorFile::from_json(&stdout(&o)).unwrap();
    let a = out.tensor4::<Rational>("A").unwrap();
    assert_eq!(out.tensor4::<Rational>("W8").unwrap(), a);
    assert!(out.tensor4::<Rational>("W3").unwrap().is_zero());
    assert_eq!(out.report.unwrap()["complete"], true);
}

#[test]
fn output_is_byte_stable() {
    let first = stdout(&hcurv(&["basis", "--n", "3", "--component", "W2", "--index", "1"]));
    let second = stdout(&hcurv(&["basis", "--n", "3", "--component", "W2", "--index", "1"]));
    assert_eq!(first, second);

    let dir = TempDir::new().unwrap();
    let p = path(&dir, "w2.json");
    std::fs::write(&p, &first).unwrap();
    let d1 = stdout(&hcurv(&["decompose", s(&p)]));
    let d2 = stdout(&hcurv(&["decompose", s(&p)]));
    assert_eq!(d1, d2);
}

#[test]
fn file_round_trip_is_lossless() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "jet.json");
    let m = HermitianModel::new(2).unwrap();
    let jet = random_kaehler_jet(&m, 7, 5);
    let mut f = TensorFile::for_scalar::<Rational>(&m);
    f.push_tensor3("h", jet.h());
    f.push_tensor4("q", jet.q());
    f.write(&p).unwrap();
    let back = TensorFile::read(&p).unwrap();
    assert_eq!(&back.tensor3::<Rational>("h").unwrap(), jet.h());
    assert_eq!(&back.tensor4::<Rational>("q").unwrap(), jet.q());
    assert_eq!(back.to_json(), std::fs::read_to_string(&p).unwrap());
}

fn write_jet(p: &Path, jet: &MetricJet<Rational>) {
    let mut f = TensorFile::for_scalar::<Rational>(jet.model());
    f.push_tensor3("h", jet.h());
    f.push_tensor4("q", jet.q());
    f.write(p).unwrap();
}

#[test]
fn curvature_of_kaehler_jet_with_first_derivative() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "jet.json");
    let m = HermitianModel::new(2).unwrap();
    let jet = random_kaehler_jet(&m, 11, 4);
    assert!(!jet.h().is_zero());
    write_jet(&p, &jet);

    let o = hcurv(&["curvature", s(&p)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = TensorFile::from_json(&stdout(&o)).unwrap();
    assert_eq!(out.tensor4::<Rational>("A").unwrap(), levi_civita_curvature(&jet));
    let report = out.report.unwrap();
    assert_eq!(report["normalized_first_jet"], true);
    assert_eq!(report["levi_civita_agrees"], true);

    let o = hcurv(&["curvature", s(&p), "--scalar", "float"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn curvature_rejects_non_kaehler_first_jet() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "jet.json");
    let m = HermitianModel::new(2).unwrap();
    // Conformal factor 1 + x2 on the x1, y1 plane: dΩ(0) != 0.
    let mut h = Tensor3::<Rational>::zeros(4);
    h.set(0, 0, 1, Rational::from_i64(1));
    h.set(2, 2, 1, Rational::from_i64(1));
    let jet = MetricJet::new(m, h, Tensor4::zeros(4)).unwrap();
    write_jet(&p, &jet);
    assert_eq!(code(&hcurv(&["curvature", s(&p)])), 1);
}

#[test]
fn examples_run_and_write() {
    let dir = TempDir::new().unwrap();
    let p = path(&dir, "ex.json");
    let o = hcurv(&["examples", "--n", "3", "-o", s(&p)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 5);
    let f = TensorFile::read(&p).unwrap();
    assert!(f.find("W9/A").is_ok());
    assert_eq!(code(&hcurv(&["examples", "--n", "2", "--case", "W6"])), 64);
}

#[test]
fn verify_all_small() {
    let o = hcurv(&["verify-all", "--n", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("8 of 8 criteria passed at 2n = 4"));
}
