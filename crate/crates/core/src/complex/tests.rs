use super::*;
use crate::elements::{min_degree, ElementDef, Family};
use crate::mesh::generators::{
    annulus, fourteen_tet_grid, interval_chain, single_simplex, square_with_midpoint, three_cells, two_cells,
    two_triangle_square,
};
use crate::mesh::{classify_boundary, FrameRule, SimplicialMesh, DEFAULT_COLLINEARITY_TOL};

fn families_in(n: usize) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for k in 0..=n {
        for f in [
            Family::R0,
            Family::R1,
            Family::R2,
            Family::HuZhang,
            Family::Trimmed,
            Family::VectorLagrange,
            Family::VectorHermite,
        ] {
            if min_degree(f, k, n).is_some() {
                out.push((f, k));
            }
        }
    }
    out
}

fn meshes(n: usize) -> Vec<SimplicialMesh> {
    vec![single_simplex(n), two_cells(n), three_cells(n)]
}

#[test]
fn assembled_dimensions_match_closed_forms() {
    for n in 1..=3 {
        for mesh in meshes(n) {
            let counts = Counts::of(&mesh);
            for (f, k) in families_in(n) {
                let m = min_degree(f, k, n).unwrap();
                for q in m..m + 3 {
                    let e = ElementDef::new(f, q, k, n).unwrap();
                    let dim = count_dofs(&mesh, &e);
                    let formula = dim_formula(f, q, k, n, counts).unwrap();
                    assert_eq!(dim as i64, formula, "{} on {:?}", e.label(), mesh.counts());
                }
            }
        }
    }
}

#[test]
fn dimension_examples() {
    let sq = two_triangle_square();
    assert_eq!(assemble_space(&sq, Family::R1, 3, 0).unwrap().dim(), 14);
    let tri = single_simplex(2);
    assert_eq!(assemble_space(&tri, Family::R1, 2, 1).unwrap().dim(), 12);
    let tet = single_simplex(3);
    assert_eq!(assemble_space(&tet, Family::R2, 3, 2).unwrap().dim(), 60);
    assert_eq!(assemble_space(&tet, Family::HuZhang, 2, 2).unwrap().dim(), 30);
    assert_eq!(assemble_space(&tet, Family::R2, 4, 1).unwrap().dim(), 105);
    let s = assemble_space(&sq, Family::R1, 2, 1).unwrap();
    for map in &s.cell_maps {
        let mut sorted = map.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), map.len());
    }
}

#[test]
fn assembled_spaces_equal_their_constraint_characterizations() {
    for n in 1..=3 {
        let mesh = three_cells(n);
        for (f, k) in families_in(n) {
            let q = min_degree(f, k, n).unwrap();
            let g = assemble_space(&mesh, f, q, k).unwrap();
            if f == Family::Trimmed {
                continue;
            }
            let ch = characterized_space(&mesh, k, q, &family_conditions(f, k, n), "constraints").unwrap();
            let cmp = space_equal(&g.to_discrete(), &ch).unwrap();
            assert!(cmp.equal, "{} {:?}", g.label(), cmp);
        }
    }
}

#[test]
fn grad_on_interval_chain_has_one_dimensional_kernel() {
    let mesh = interval_chain(3);
    let src = assemble_space(&mesh, Family::R1, 4, 0).unwrap();
    let dst = assemble_space(&mesh, Family::R1, 3, 1).unwrap();
    let d = assemble_d(&src, &dst).unwrap();
    assert_eq!(crate::linalg::rank(&d.to_dense()), src.dim() - 1);
}

#[test]
fn rows_are_exact_complexes() {
    let cases: Vec<(SimplicialMesh, FamilyRow)> = vec![
        (interval_chain(3), FamilyRow::standard(1, 1, 3)),
        (interval_chain(3), FamilyRow::standard(2, 1, 5)),
        (two_triangle_square(), FamilyRow::standard(1, 2, 3)),
        (square_with_midpoint(), FamilyRow::standard(1, 2, 4)),
        (two_triangle_square(), FamilyRow::standard(2, 2, 5)),
        (single_simplex(3), FamilyRow::standard(1, 3, 3)),
        (two_cells(3), FamilyRow::standard(1, 3, 3)),
        (single_simplex(3), FamilyRow::standard(2, 3, 5)),
        (two_cells(3), FamilyRow::standard(0, 3, 4)),
    ];
    for (mesh, row) in cases {
        let r = verify_exactness(&mesh, &row, &contractible_betti(mesh.dim())).unwrap();
        assert!(r.pass(), "{:?}", r);
        assert_eq!(r.alternating_sum, 1);
        let last = *r.ranks.last().unwrap();
        assert_eq!(last, *r.dims.last().unwrap(), "last map onto");
    }
}

#[test]
fn annulus_has_one_harmonic_class() {
    let mesh = annulus();
    assert_eq!(simplicial_betti(&mesh), vec![1, 1, 0]);
    let r = verify_exactness(&mesh, &FamilyRow::standard(1, 2, 3), &[1, 1, 0]).unwrap();
    assert!(r.pass(), "{r:?}");
    assert_eq!(r.betti, vec![1, 1, 0]);
    let strict = verify_exactness(&mesh, &FamilyRow::standard(1, 2, 3), &contractible_betti(2)).unwrap();
    assert!(!strict.pass());
}

#[test]
fn mixed_sequence_is_exact() {
    for p in [3, 4] {
        let r = mixed_sequence(&single_simplex(3), p).unwrap();
        assert!(r.pass(), "{r:?}");
    }
    let r = mixed_sequence(&two_cells(3), 3).unwrap();
    assert!(r.pass(), "{r:?}");
}

#[test]
fn hz_divergence_is_onto() {
    for mesh in [single_simplex(3), two_cells(3)] {
        let (rank, target) = hz_divergence(&mesh, 2).unwrap();
        assert_eq!(rank, target);
    }
}

#[test]
fn wrong_pairing_is_rejected() {
    let mesh = two_triangle_square();
    // d of the Hermite space is not in discontinuous degree 0
    let src = assemble_space(&mesh, Family::R1, 3, 0).unwrap();
    let dst = assemble_space(&mesh, Family::R0, 1, 1).unwrap();
    assert!(assemble_d(&src, &dst).is_err());
}

#[test]
fn frame_choice_does_not_change_ranks() {
    let mesh = two_cells(3);
    let row = FamilyRow::standard(2, 3, 5);
    let a = verify_exactness(&mesh, &row, &contractible_betti(3)).unwrap();
    let rule = FrameRule { reference: [0.3, -0.8, 0.52] };
    let b = verify_exactness_with(&mesh, &row, &contractible_betti(3), &rule).unwrap();
    assert_eq!(a.dims, b.dims);
    assert_eq!(a.ranks, b.ranks);
    assert!(b.pass());
}

#[test]
fn box_identities() {
    let mesh = two_cells(3);
    let a = assemble_space(&mesh, Family::R1, 2, 2).unwrap().to_discrete();
    let b = assemble_space(&mesh, Family::R0, 2, 2).unwrap().to_discrete();
    assert!(space_equal(&a, &b).unwrap().equal);
    let sq = two_triangle_square();
    let a = assemble_space(&sq, Family::R1, 2, 1).unwrap().to_discrete();
    let b = assemble_space(&sq, Family::R0, 2, 1).unwrap().to_discrete();
    let cmp = space_equal(&a, &b).unwrap();
    assert!(!cmp.equal);
    assert!(cmp.dim_a < cmp.dim_b);
    // Stenberg functions are BDM functions but not conversely
    assert!(cmp.residual_a_in_b < CONSTRAINT_TOL);
}

#[test]
fn boundary_rules_match_constraints() {
    for mesh in [two_triangle_square(), square_with_midpoint()] {
        let cl = classify_boundary(&mesh, DEFAULT_COLLINEARITY_TOL);
        for p in [3, 4] {
            let mut dims = Vec::new();
            for (k, q) in [(0, p + 2), (1, p + 1), (2, p)] {
                let s = assemble_space(&mesh, Family::R1, q, k).unwrap();
                let h = restrict_homogeneous(&mesh, &s, &cl).unwrap();
                assert_eq!(Some(h.dim), h.rule_dim, "k={k} q={q}");
                dims.push(h.dim as i64);
            }
            assert_eq!(dims[0] - dims[1] + dims[2], 0);
        }
    }
    // the midpoint mesh keeps one more DoF than an all-corner count would give
    let mesh = square_with_midpoint();
    let cl = classify_boundary(&mesh, DEFAULT_COLLINEARITY_TOL);
    assert_eq!(cl.v0s(), 1);
    let s = assemble_space(&mesh, Family::R1, 4, 0).unwrap();
    let h = restrict_homogeneous(&mesh, &s, &cl).unwrap();
    let counts = boundary_counts(&cl, &mesh);
    let all_corner = BoundaryCounts { v0s: 0, ..counts };
    let all_corner_dim = s.dim() as i64 - removed_dofs_2d(0, 4, &all_corner).unwrap();
    assert_eq!(h.dim as i64, all_corner_dim + 1);
}

#[test]
fn homogeneous_sequence_is_exact() {
    let mesh = square_with_midpoint();
    let cl = classify_boundary(&mesh, DEFAULT_COLLINEARITY_TOL);
    let spaces: Vec<_> = [(0, 5), (1, 4), (2, 3)]
        .iter()
        .map(|&(k, q)| restrict_homogeneous(&mesh, &assemble_space(&mesh, Family::R1, q, k).unwrap(), &cl).unwrap().space)
        .collect();
    let r = verify_discrete_sequence("homogeneous", &spaces, &[0, 0, 0]).unwrap();
    assert!(r.pass(), "{r:?}");
}

#[test]
fn bubble_decompositions() {
    for p in [2, 3] {
        let r = verify_decomposition_2d(&two_triangle_square(), p).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.dim_smooth < r.dim_target);
    }
    let r = verify_decomposition_3d(&single_simplex(3), 4).unwrap();
    assert!(r.holds, "{r:?}");
    let r = verify_decomposition_3d(&two_cells(3), 4).unwrap();
    assert!(r.holds, "{r:?}");
}

#[test]
fn savings_on_the_grid() {
    let mesh = fourteen_tet_grid(2, 2, 2);
    let s = dof_savings(4, &mesh).unwrap();
    assert_eq!(s.dim_nedelec as i64, s.nedelec_formula);
    assert_eq!(s.dim_new as i64, s.new_formula);
    assert_eq!(s.per_t_nedelec, 170.0);
    assert_eq!(s.per_t_new, 30.5);
    assert_eq!(s.per_t_difference, 139.5);
    assert!(s.dim_new < s.dim_nedelec);
}

#[test]
fn sparse_export_round_trip() {
    let mesh = two_triangle_square();
    let src = assemble_space(&mesh, Family::R1, 3, 0).unwrap();
    let dst = assemble_space(&mesh, Family::R1, 2, 1).unwrap();
    let d = assemble_d(&src, &dst).unwrap();
    let text = d.to_coo_text();
    assert!(text.starts_with(&format!("{} {} {}\n", d.rows, d.cols, d.nnz())));
    let back = OperatorMatrix::from_coo_text(&text).unwrap();
    assert_eq!(back.entries, d.entries);
}
