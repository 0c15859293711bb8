use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::combinatorics::monomials;
use crate::mesh::build_mesh;
use crate::mesh::generators::{annulus, single_simplex, square_with_midpoint, two_triangle_square};

fn tri(points: [[f64; 2]; 3]) -> Simplex {
    Simplex::new(points.iter().map(|p| p.to_vec()).collect()).unwrap()
}

fn skewed() -> Simplex {
    tri([[0.1, -0.2], [1.3, 0.15], [0.35, 0.9]])
}

/// Value of the 1-form with frame coefficients `c` (constant) on a Cartesian vector.
fn apply_one_form(simplex: &Simplex, c: &[f64], v: [f64; 2]) -> f64 {
    let g = simplex.gradients();
    (1..=2).map(|i| c[i - 1] * (g[(i, 0)] * v[0] + g[(i, 1)] * v[1])).sum()
}

#[test]
fn s0_of_constant_field() {
    let s = skewed();
    let l = s0_local(&s, 0);
    // (u₁, u₂) = (1, 0) ↦ dx²: pairs to 0 with e₁ and 1 with e₂.
    let out = &l * nalgebra::DVector::from_vec(vec![1.0, 0.0]);
    assert!(apply_one_form(&s, out.as_slice(), [1.0, 0.0]).abs() < 1e-14);
    assert!((apply_one_form(&s, out.as_slice(), [0.0, 1.0]) - 1.0).abs() < 1e-14);
    // (0, 1) ↦ −dx¹.
    let out = &l * nalgebra::DVector::from_vec(vec![0.0, 1.0]);
    assert!((apply_one_form(&s, out.as_slice(), [1.0, 0.0]) + 1.0).abs() < 1e-14);
    assert!(apply_one_form(&s, out.as_slice(), [0.0, 1.0]).abs() < 1e-14);
}

/// Frame coefficients of the constant vector 1-form with Cartesian rows w.
fn frame_of(s: &Simplex, w: [[f64; 2]; 2]) -> Vec<f64> {
    // dx^a = Σ_i (v_i − v_0)_a dλ_i
    let e = s.edge_matrix();
    let mut out = Vec::new();
    for row in w {
        for i in 0..2 {
            out.push(row[0] * e[(i, 0)] + row[1] * e[(i, 1)]);
        }
    }
    out
}

/// Cartesian dx¹∧dx² coefficient of a constant frame 2-form coefficient.
fn cartesian_area(s: &Simplex, c: f64) -> f64 {
    let g = s.gradients();
    c * (g[(1, 0)] * g[(2, 1)] - g[(1, 1)] * g[(2, 0)])
}

#[test]
fn s1_kills_symmetric_matrices_and_takes_twice_the_identity() {
    let s = skewed();
    let l = s1_local(&s, 0);
    // Matrix form row i is (−w_{i2}, w_{i1}); M symmetric ⇔ w₁₁ + w₂₂ = 0.
    for m in [[[1.0, 0.0], [0.0, 1.0]], [[0.3, -1.2], [-1.2, 2.0]]] {
        let w = [[m[0][1], -m[0][0]], [m[1][1], -m[1][0]]];
        let out = &l * nalgebra::DVector::from_vec(frame_of(&s, w));
        assert!(out[0].abs() < 1e-14, "{out}");
    }
    // w = I: −(w₁₁ + w₂₂) dx¹∧dx² = −2 dx¹∧dx², i.e. 2χ in matrix form.
    let out = &l * nalgebra::DVector::from_vec(frame_of(&s, [[1.0, 0.0], [0.0, 1.0]]));
    assert!((cartesian_area(&s, out[0]) + 2.0).abs() < 1e-13);
}

#[test]
fn s0_is_an_isomorphism_and_s1_onto() {
    let mesh = two_triangle_square();
    let d1 = BggDiagram::build(&mesh, 1).unwrap();
    assert_eq!(d1.s0.nrows(), d1.s0.ncols());
    assert_eq!(linalg::rank(&d1.s0), d1.bottom[0].dim());
    let inv = d1.s0_inverse().unwrap();
    let id = DMatrix::identity(d1.s0.ncols(), d1.s0.ncols());
    assert!(linalg::max_abs(&(&inv * &d1.s0 - id)) < 1e-10);
    let d2 = BggDiagram::build(&mesh, 2).unwrap();
    assert_eq!(linalg::rank(&d2.s1), d2.top[2].dim());
}

#[test]
fn s0_rejects_mismatched_spaces() {
    let mesh = two_triangle_square();
    let v = valued_space(&mesh, 1, 0, 3, ValueType::Vector).unwrap();
    let k = valued_space(&mesh, 2, 1, 4, ValueType::Skew).unwrap();
    assert!(matches!(s0_operator(&mesh, &v, &k), Err(Error::DimensionMismatch(_))));
    let k3 = valued_space(&mesh, 2, 1, 3, ValueType::Skew).unwrap();
    assert!(s0_operator(&mesh, &k3, &v).is_err());
}

#[test]
fn bgg_identity_holds() {
    assert!(BggDiagram::build(&single_simplex(2), 1).unwrap().identity_residual() < 1e-10);
    assert!(BggDiagram::build(&two_triangle_square(), 2).unwrap().identity_residual() < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let base = two_triangle_square();
        let verts: Vec<Vec<f64>> = base
            .vertices()
            .iter()
            .map(|v| v.iter().map(|x| x + rng.gen_range(-0.15..0.15)).collect())
            .collect();
        let mesh = build_mesh(verts, base.cells().to_vec()).unwrap();
        assert!(BggDiagram::build(&mesh, 1).unwrap().identity_residual() < 1e-9);
    }
}

#[test]
fn xi_is_exact_on_contractible_meshes() {
    for (mesh, p) in [(single_simplex(2), 1), (two_triangle_square(), 1), (two_triangle_square(), 2), (square_with_midpoint(), 1)] {
        let r = xi_complex(&mesh, p).unwrap();
        assert!(r.pass(), "{r:?}");
        // kernel of 𝒜₀ is the rigid motions
        assert_eq!(r.betti, vec![3, 0, 0]);
        assert_eq!(*r.ranks.last().unwrap(), *r.dims.last().unwrap());
    }
}

#[test]
fn xi_on_annulus_has_rigid_motion_valued_harmonics() {
    let r = xi_complex(&annulus(), 1).unwrap();
    assert!(r.dd_ok);
    assert_eq!(r.betti, vec![3, 3, 0]);
}

#[test]
fn gamma_diagram_commutes() {
    let mesh = two_triangle_square();
    let diag = BggDiagram::build(&mesh, 1).unwrap();
    let (pi0, pi1) = projections(&diag).unwrap();
    let a0 = diag.block(0).to_dense();
    let a1 = diag.block(1).to_dense();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let x = nalgebra::DVector::from_fn(a0.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        let lhs = &a0 * (&pi0 * &x);
        let rhs = &pi1 * (&a0 * &x);
        assert!((lhs - rhs).amax() < 1e-9);
        let y = nalgebra::DVector::from_fn(a1.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        assert!((&a1 * (&pi1 * &y) - &a1 * &y).amax() < 1e-9);
    }
    assert!(gamma_report(&diag).unwrap().max() < 1e-10);
}

#[test]
fn stress_counts_match_the_identity() {
    for p in 3..=6 {
        let c = HuZhangStressElement::new(p).unwrap().counts();
        assert!(c.identity_holds(), "{c:?}");
        // dim P⁻_{p−1}Λ¹(T²) = (p−1)(p+1)
        assert_eq!(c.trimmed_twice, 2 * ((p - 1) * (p + 1)) as i64);
        assert_eq!(c.vertex, 12);
        assert_eq!(c.edge, 6 * (p as usize - 1));
    }
    let c3 = HuZhangStressElement::new(3).unwrap().counts();
    assert_eq!((c3.interior_skew, c3.interior_symmetric), (7, 9));
    let c4 = HuZhangStressElement::new(4).unwrap().counts();
    assert_eq!((c4.interior_skew, c4.interior_symmetric, c4.trimmed_twice), (12, 18, 30));
}

#[test]
fn stress_element_rejects_low_degree() {
    assert!(matches!(HuZhangStressElement::new(2), Err(Error::DegreeTooLow { .. })));
}

#[test]
fn stress_element_is_unisolvent() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for p in 3..=6 {
        for _ in 0..3 {
            let s = loop {
                let pts: Vec<Vec<f64>> = (0..3).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
                if let Ok(s) = Simplex::new(pts) {
                    if s.measure() > 0.1 {
                        break s;
                    }
                }
            };
            let (_, r) = huzhang_stress(p, &s).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.symmetric_dim, 3 * (p as usize + 1) * (p as usize + 2) / 2);
        }
    }
}

#[test]
fn dropping_a_symmetric_dof_breaks_unisolvence() {
    let mut e = HuZhangStressElement::new(3).unwrap();
    let i = e.dofs.iter().position(|d| matches!(d, StressDof::InteriorSymmetricMoment { .. })).unwrap();
    e.dofs.remove(i);
    assert!(!e.unisolvence(&skewed()).pass);
}

#[test]
fn symmetric_constants_have_no_skew_moments() {
    let e = HuZhangStressElement::new(4).unwrap();
    let s = skewed();
    let d = e.dof_matrix(&s);
    let m = monomials(3, 4).len();
    // constant symmetric matrix [[2, 5], [5, −1]] written in degree-4 monomials via (Σλ)^4
    let mut coeffs = vec![0.0; 4 * m];
    for (i, alpha) in monomials(3, 4).list.iter().enumerate() {
        let multinomial = 24.0 / alpha.iter().map(|&a| (1..=a).product::<u32>() as f64).product::<f64>();
        for (block, v) in [2.0, 5.0, 5.0, -1.0].iter().enumerate() {
            coeffs[block * m + i] = v * multinomial;
        }
    }
    let values = &d * nalgebra::DVector::from_vec(coeffs);
    for (r, dof) in e.dofs.iter().enumerate() {
        if dof.is_skew() {
            assert!(values[r].abs() < 1e-12, "{dof:?}");
        }
    }
}

#[test]
fn symmetric_bubbles_have_zero_normal_trace() {
    let s = skewed();
    let p = 4;
    let b = symmetric_bubble_basis(&s, p);
    assert_eq!(b.ncols(), 3 * 4 * 3 / 2);
    let table = monomials(3, p as usize);
    let m = table.len();
    let pts = s.points();
    for j in 0..b.ncols() {
        for e in 0..3 {
            let (a, c) = ((e + 1) % 3, (e + 2) % 3);
            let t = [pts[c][0] - pts[a][0], pts[c][1] - pts[a][1]];
            let nu = [t[1], -t[0]];
            for step in [0.2, 0.5, 0.7] {
                let mut bary = [0.0f64; 3];
                bary[a] = 1.0 - step;
                bary[c] = step;
                let val = |blk: usize| -> f64 {
                    table.list.iter().enumerate().map(|(i, al)| {
                        b[(blk * m + i, j)] * (0..3).map(|q| bary[q].powi(al[q] as i32)).product::<f64>()
                    }).sum()
                };
                let (t11, t12, t22) = (val(0), val(1), val(2));
                assert!((t11 * nu[0] + t12 * nu[1]).abs() < 1e-10);
                assert!((t12 * nu[0] + t22 * nu[1]).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn huzhang_row_is_exact_and_commutes() {
    for (mesh, p) in [(single_simplex(2), 2), (two_triangle_square(), 2)] {
        let r = huzhang_row(&mesh, p).unwrap();
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.exactness.betti, vec![3, 0, 0]);
    }
}

#[test]
fn airy_matches_second_derivatives() {
    // Airy of u = x², written as a K-valued 0-form, is the constant matrix
    // −[[∂₂²u, −∂₁∂₂u], [−∂₁∂₂u, ∂₁²u]] = −[[0, 0], [0, 2]].
    let mesh = single_simplex(2);
    let diag = BggDiagram::build(&mesh, 1).unwrap();
    let s = mesh.cell_simplex(0);
    let q = diag.top[0].degree();
    let table = monomials(3, q as usize);
    // x = λ₁ on the reference triangle, so x² = λ₁²(Σλ)^{q−2}.
    let mut f = vec![0.0; table.len()];
    for (i, alpha) in table.list.iter().enumerate() {
        if alpha[1] >= 2 {
            let rest: Vec<u32> = vec![alpha[0], alpha[1] - 2, alpha[2]];
            let fact = |a: u32| (1..=a).product::<u32>() as f64;
            f[i] = fact(q as u32 - 2) / rest.iter().map(|&a| fact(a)).product::<f64>();
        }
    }
    let coords = represent(&diag.top[0].basis(), &DMatrix::from_column_slice(f.len(), 1, &f), "x^2").unwrap().0;
    let inv = diag.s0_inverse().unwrap();
    let airy = &diag.d_bottom[0] * &inv * &diag.d_top[0] * coords;
    let broken = diag.bottom[1].basis() * airy;
    // one cell, so the broken layout is the local copy-major layout
    let m = FormSpace::new(2, q - 2, 0).dim();
    let frame: Vec<f64> = (0..4 * m).map(|i| broken[(i, 0)]).collect();
    let entries = entries_from_frame(&s, q - 2) * nalgebra::DVector::from_vec(frame);
    // a constant field, read off at the centroid
    let at = |blk: usize| -> f64 {
        monomials(3, (q - 2) as usize).list.iter().enumerate().map(|(i, al)| {
            entries[blk * m + i] * al.iter().map(|&a| (1.0f64 / 3.0).powi(a as i32)).product::<f64>()
        }).sum()
    };
    let expect = [0.0, 0.0, 0.0, -2.0];
    for (blk, e) in expect.iter().enumerate() {
        assert!((at(blk) - e).abs() < 1e-9, "entry {blk}: {} vs {e}", at(blk));
    }
}
