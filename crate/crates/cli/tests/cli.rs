use std::path::Path;
use std::process::{Command, Output};

use derham::mesh::generators;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(args)
        .env_remove("DERHAM_TOL")
        .output()
        .expect("spawn derham")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn write_square(dir: &Path) -> String {
    let path = dir.join("square.json");
    generators::two_triangle_square().write(&path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn verify_square_r1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_square(dir.path());
    let o = run(&["verify", "--mesh", &mesh, "--r", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    // betti column equals expected column everywhere
    assert!(rows.iter().all(|r| r[7] == r[8]));
}

#[test]
fn verify_annulus_without_betti_fails_and_reports_b1() {
    let o = run(&["verify", "--mesh", "builtin:annulus", "--r", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("b1=1"));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[1][7], "1");

    let o = run(&["verify", "--mesh", "builtin:annulus", "--r", "1", "--betti", "1,1,0"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_mesh_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"vertices\": [[0,0],[1,0]], \"cells\": [[0,1,").unwrap();
    let o = run(&["verify", "--mesh", path.to_str().unwrap(), "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cannot read mesh"));

    let o = run(&["verify", "--mesh", dir.path().join("missing.json").to_str().unwrap(), "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_flag_and_bad_range_are_usage_errors() {
    assert_eq!(run(&["tables", "--dim", "2", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--dim", "2", "--p-range", "5:3"]).status.code(), Some(2));
    assert_eq!(run(&["tables", "--dim", "2", "--p-range", "x"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--mesh", "builtin:nowhere", "--r", "1"]).status.code(), Some(2));
}

#[test]
fn tables_on_square() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_square(dir.path());
    for p in 2..=4i64 {
        let o = run(&["tables", "--dim", "2", "--p", &p.to_string(), "--mesh", &mesh]);
        assert_eq!(o.status.code(), Some(0));
        let rows = csv_rows(&stdout(&o));
        assert_eq!(rows.len(), 9);
        for r in ["0", "1", "2"] {
            assert!(rows.iter().any(|row| row[1] == r));
        }
        // r=1, k=2 is discontinuous P_p: C(p+2,2) per triangle, F = 2
        let cell = rows.iter().find(|row| row[1] == "1" && row[2] == "2").unwrap();
        assert_eq!(cell[7].parse::<i64>().unwrap(), (p + 2) * (p + 1) / 2 * 2);
        for row in &rows {
            assert_ne!(row[9], "formula mismatch");
        }
    }
}

#[test]
fn tables_r2_k2_single_tet() {
    let o = run(&["tables", "--dim", "3", "--p", "3", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    let cell = rows.iter().find(|row| row[1] == "2").unwrap();
    assert_eq!(cell[7], "60");
}

#[test]
fn tables_json_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let o = run(&["tables", "--dim", "2", "--p-range", "3:4", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 18);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["bgg", "--mesh", "builtin:square", "--p", "1", "--format", "json"]);
    let b = run(&["bgg", "--mesh", "builtin:square", "--p", "1", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn element_r2_k1_3d_p4() {
    let o = run(&["element", "--r", "2", "--k", "1", "--dim", "3", "--p", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][4], "105");
    assert_eq!(rows[0][6], "105");
    assert_eq!(rows[0][10], "true");
}

#[test]
fn element_below_minimum_degree_is_usage_error() {
    let o = run(&["element", "--r", "2", "--k", "0", "--dim", "2", "--p", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bc_square_r1() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = write_square(dir.path());
    let o = run(&["bc", "--mesh", &mesh, "--r", "1", "--p", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    for row in &rows {
        assert_eq!(row[6], "4");
        assert_eq!(row[7], "0");
        assert_eq!(row[4], row[5]);
        assert_eq!(row[9], "0");
    }
}

#[test]
fn compare_grid() {
    let o = run(&["compare", "--p", "4", "--grid", "2,2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][10], "170");
    assert_eq!(rows[0][11], "30.5");
    assert_eq!(rows[0][5], rows[0][6]);
    assert_eq!(rows[0][7], rows[0][8]);
}

#[test]
fn tolerance_env_and_flag() {
    let ok = run(&["verify", "--mesh", "builtin:square", "--r", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    let strict = Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(["verify", "--mesh", "builtin:square", "--r", "1"])
        .env("DERHAM_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    // the flag wins over the environment
    let flag = Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(["verify", "--mesh", "builtin:square", "--r", "1", "--tol", "1e-8"])
        .env("DERHAM_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(flag.status.code(), Some(0));
}

#[test]
fn export_operators_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ops");
    let o = run(&["export", "--mesh", "builtin:square", "--r", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let d0 = derham::complex::OperatorMatrix::from_coo_text(&std::fs::read_to_string(out.join("d0.coo")).unwrap()).unwrap();
    let d1 = derham::complex::OperatorMatrix::from_coo_text(&std::fs::read_to_string(out.join("d1.coo")).unwrap()).unwrap();
    let prod = d1.to_dense() * d0.to_dense();
    assert!(prod.amax() < 1e-10);
    assert!(out.join("manifest.json").exists());
}

#[test]
fn export_dual_basis() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("basis");
    let o = run(&["export", "--r", "1", "--k", "0", "--dim", "2", "--p", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let files = std::fs::read_dir(&out).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().starts_with("basis_")
    });
    assert_eq!(files.count(), 10);
}
