//! End-to-end use of the public API: mesh file in, assembled row, exported
//! operators, exactness.

use derham::complex::{row_operators, simplicial_betti, verify_exactness, FamilyRow, OperatorMatrix};
use derham::mesh::{generators, FrameRule, MeshFile, SimplicialMesh};

#[test]
fn mesh_file_round_trip_keeps_topology() {
    let mesh = generators::square_with_midpoint();
    let text = mesh.to_file().to_json();
    let back = MeshFile::parse(&text).unwrap().build().unwrap();
    assert_eq!(back.counts(), mesh.counts());
    assert_eq!(back.euler_characteristic(), 1);
}

#[test]
fn malformed_mesh_files_are_rejected() {
    assert!(MeshFile::parse("{").is_err());
    // a cell that references a missing vertex
    let bad = r#"{"dim": 2, "vertices": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], "cells": [[0, 1, 7]]}"#;
    assert!(MeshFile::parse(bad).and_then(|m| m.build()).is_err());
}

#[test]
fn row_from_file_is_exact_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("annulus.json");
    generators::annulus().write(&path).unwrap();
    let mesh = SimplicialMesh::read(&path).unwrap();
    let betti = simplicial_betti(&mesh);
    assert_eq!(betti, vec![1, 1, 0]);

    let row = FamilyRow::standard(1, 2, 3);
    let report = verify_exactness(&mesh, &row, &betti).unwrap();
    assert!(report.pass(), "{report:?}");
    assert_eq!(report.alternating_sum, mesh.euler_characteristic());

    let spaces = row.assemble(&mesh, &FrameRule::default()).unwrap();
    let ops = row_operators(&spaces).unwrap();
    let back: Vec<OperatorMatrix> =
        ops.iter().map(|d| OperatorMatrix::from_coo_text(&d.to_coo_text()).unwrap()).collect();
    let dd = back[1].to_dense() * back[0].to_dense();
    assert!(dd.amax() < 1e-10);
}
