use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bubbles::{check_sigma_c, hdiv_bubble_formula, max_normal_trace_2d};
use super::*;

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Simplex {
    loop {
        let pts: Vec<Vec<f64>> = (0..=n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        if let Ok(s) = Simplex::new(pts) {
            // keep shapes reasonable so the check measures the element, not the geometry
            let longest = (0..=n)
                .flat_map(|i| (0..=n).map(move |j| (i, j)))
                .map(|(i, j)| {
                    let (a, b) = (&s.points()[i], &s.points()[j]);
                    (0..n).map(|c| (a[c] - b[c]).powi(2)).sum::<f64>().sqrt()
                })
                .fold(0.0, f64::max);
            if s.measure() > 0.1 * longest.powi(n as i32) / (1..=n).product::<usize>() as f64 {
                return s;
            }
        }
    }
}

fn all_families() -> Vec<(Family, usize, usize)> {
    let mut out = Vec::new();
    for n in 1..=3 {
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
                    out.push((f, k, n));
                }
            }
        }
    }
    out
}

#[test]
fn dof_counts_match_shape_dimension() {
    for (f, k, n) in all_families() {
        let m = min_degree(f, k, n).unwrap();
        for p in m..=m + 3 {
            for layout in [Layout::Moments, Layout::Classes] {
                let e = ElementDef::with_layout(f, p, k, n, layout).unwrap();
                assert_eq!(e.dofs.len(), e.expected_dim(), "{} {:?}", e.label(), layout);
                assert_eq!(e.shape_dim(), e.expected_dim(), "{}", e.label());
            }
        }
    }
}

#[test]
fn lowest_order_examples() {
    let e = element_def(Family::R1, 2, 1, 2).unwrap();
    assert_eq!([e.dofs_per_entity(0), e.dofs_per_entity(1), e.dofs_per_entity(2)], [2, 1, 3]);
    let e = element_def(Family::R1, 2, 1, 3).unwrap();
    let per: Vec<_> = (0..4).map(|d| e.dofs_per_entity(d)).collect();
    assert_eq!(per, vec![3, 1, 3, 0]);
    assert_eq!(e.dofs.len(), 30);
    let e = element_def(Family::R2, 3, 2, 3).unwrap();
    let per: Vec<_> = (0..4).map(|d| e.dofs_per_entity(d)).collect();
    assert_eq!(per, vec![3, 0, 7, 20]);
    assert_eq!(e.dofs.len(), 60);
    let e = element_def(Family::R2, 4, 1, 3).unwrap();
    assert_eq!(e.dofs.len(), 105);
    // both face binomials: 2·C(p−1,2) is the one that adds up
    assert_eq!(e.dofs_per_entity(2), 6);
    let e = element_def(Family::R2, 5, 0, 3).unwrap();
    assert_eq!(e.dofs.len(), 56);
}

#[test]
fn degree_below_minimum_is_rejected() {
    match element_def(Family::R2, 4, 0, 3) {
        Err(crate::Error::DegreeTooLow { min, .. }) => assert_eq!(min, 5),
        other => panic!("unexpected {other:?}"),
    }
    assert!(element_def(Family::HuZhang, 3, 1, 3).is_err());
}

#[test]
fn every_family_is_unisolvent_on_random_simplices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (f, k, n) in all_families() {
        let m = min_degree(f, k, n).unwrap();
        let top = if n == 3 { m + 1 } else { m + 2 };
        for p in m..=top {
            for layout in [Layout::Moments, Layout::Classes] {
                let e = ElementDef::with_layout(f, p, k, n, layout).unwrap();
                for _ in 0..5 {
                    let s = random_simplex(&mut rng, n);
                    let r = unisolvence_check(&e, &s, UNISOLVENCE_TOL);
                    assert!(r.pass, "{} {:?}: {:?}", e.label(), layout, r);
                    assert!(r.dimension_identity);
                }
            }
        }
    }
}

#[test]
fn three_dimensional_elements_up_to_degree_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in 2..=5 {
        for (f, k) in [(Family::R1, 1), (Family::R2, 2)] {
            if p < min_degree(f, k, 3).unwrap() {
                continue;
            }
            let e = element_def(f, p, k, 3).unwrap();
            for _ in 0..5 {
                let s = random_simplex(&mut rng, 3);
                let r = unisolvence_check(&e, &s, UNISOLVENCE_TOL);
                assert!(r.pass, "{}: {:?}", e.label(), r);
            }
        }
    }
    // ½p³+3p²+11p/2+3 = 3·C(p+3,3)
    for p in 2..=5 {
        let e = element_def(Family::R1, p, 1, 3).unwrap();
        let p = p as f64;
        assert_eq!(e.dofs.len() as f64, 0.5 * p.powi(3) + 3.0 * p * p + 5.5 * p + 3.0);
    }
}

#[test]
fn dropping_a_dof_fails_with_rank_deficiency_one() {
    let e = element_def(Family::R1, 3, 1, 3).unwrap();
    let s = Simplex::reference(3);
    let dropped = e.without_dof(e.dofs.len() - 1);
    assert_eq!(dropped.dofs.last().unwrap().entity.dim, 3);
    let r = unisolvence_check(&dropped, &s, UNISOLVENCE_TOL);
    assert!(!r.pass);
    assert_eq!(r.shape_dim - r.rank, 1);
    assert!(dual_basis(&dropped, &s).is_err());
}

#[test]
fn dual_bases_satisfy_kronecker_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (f, k, n) in all_families() {
        let m = min_degree(f, k, n).unwrap();
        let top = if n == 3 { m + 1 } else { m + 2 };
        for p in m..=top {
            let e = element_def(f, p, k, n).unwrap();
            let s = random_simplex(&mut rng, n);
            let b = dual_basis(&e, &s).unwrap();
            let res = kronecker_residual(&e, &s, &b);
            assert!(res < 1e-8, "{}: {res:e}", e.label());
        }
    }
}

#[test]
fn lagrange_dual_basis_is_barycentric() {
    let e = element_def(Family::R0, 1, 0, 2).unwrap();
    let s = Simplex::reference(2);
    let b = dual_basis(&e, &s).unwrap();
    let table = e.space.table();
    for j in 0..3 {
        let mut alpha = vec![0u32; 3];
        alpha[j] = 1;
        let idx = table.index_of(&alpha).unwrap();
        for r in 0..3 {
            let want = if r == idx { 1.0 } else { 0.0 };
            assert!((b.coeffs[(r, j)] - want).abs() < 1e-12);
        }
    }
}

#[test]
fn stenberg_vertex_functions_take_unit_values() {
    let e = element_def(Family::R1, 2, 1, 2).unwrap();
    let s = Simplex::new(vec![vec![0.2, 0.1], vec![1.3, 0.0], vec![0.4, 0.9]]).unwrap();
    let b = dual_basis(&e, &s).unwrap();
    // B = (−ω₂, ω₁); vertex DoFs are B_1, B_2 at each vertex
    for v in 0..3 {
        for i in 0..2 {
            let j = 2 * v + i;
            assert_eq!(b.classes[j], DofClass::Vertex);
            let w = b.member(j).evaluate(&s, &s.points()[v]);
            let bvec = [-w[1], w[0]];
            for (c, val) in bvec.iter().enumerate() {
                let want = if c == i { 1.0 } else { 0.0 };
                assert!((val - want).abs() < 1e-9);
            }
        }
    }
    let groups = b.grouped();
    assert_eq!(groups["Vertex"].len(), 6);
    assert_eq!(groups["EdgeNormal"].len(), 3);
}

#[test]
fn sigma_c_is_the_tangential_bubble_space() {
    let s = Simplex::new(vec![
        vec![0.1, 0.0, 0.0],
        vec![1.2, 0.1, 0.0],
        vec![0.3, 1.1, 0.2],
        vec![0.2, 0.3, 0.9],
    ])
    .unwrap();
    for p in 2..=6 {
        let c = check_sigma_c(&s, p, 25).unwrap();
        assert!(c.ranks_agree(), "{c:?}");
        assert_eq!(c.spanning_rank as i64, c.formula, "p={p}");
        assert_eq!(c.spanning_rank, dim_trimmed(3, p - 2, 2));
        assert!(c.max_sampled_trace < 1e-10);
    }
    assert_eq!(check_sigma_c(&s, 4, 25).unwrap().spanning_rank, 15);
}

#[test]
fn hdiv_bubbles_have_zero_normal_trace() {
    let s = Simplex::new(vec![vec![0.0, 0.0], vec![2.0, 0.3], vec![0.5, 1.4]]).unwrap();
    for p in 1..=5 {
        let b = hdiv_bubble_basis(p).unwrap();
        assert_eq!(b.len() as i64, hdiv_bubble_formula(p));
        assert_eq!(b.len() as i64, ((p + 1) * (p - 1)) as i64);
        assert!(max_normal_trace_2d(&s, &b.members(), 20) < 1e-10);
    }
}

#[test]
fn jet_sequences() {
    let r = jet_complex_ranks(3, 2);
    assert_eq!(r.dims, vec![1, 10, 12, 3, 0]);
    assert!(r.exact);
    let r = jet_complex_ranks(5, 2);
    assert_eq!(r.dims, vec![1, 21, 30, 10, 0]);
    assert_eq!(r.ranks, vec![20, 10]);
    assert!(r.exact);
    let r = jet_complex_ranks(1, 2);
    assert_eq!(r.dims, vec![1, 3, 2, 0, 0]);
    assert!(r.exact);
    for n in 1..=6 {
        for rr in 1..=2 {
            let rep = jet_complex_ranks(n, rr);
            assert!(rep.exact && rep.composition_zero);
            assert_eq!(rep.dims[1], (crate::combinatorics::binomial((n + rr) as i64, rr as i64)) as usize);
        }
    }
}

#[test]
fn bubble_counts_of_the_rows() {
    let r = subsimplex_bubble_dims(3, 2, 6).unwrap();
    assert_eq!(r.edge_formula, Some((5, 5)));
    assert_eq!(r.edge_actual, Some((5, 5)));
    assert!(r.exact(), "{r:?}");
    let r = subsimplex_bubble_dims(3, 2, 5).unwrap();
    assert_eq!(r.edge_actual, Some((2, 2)));
    let r = subsimplex_bubble_dims(3, 1, 4).unwrap();
    assert_eq!(r.entities[3].defect, 0);
    assert!(r.exact(), "{r:?}");
    for n in 1..=2 {
        for (rr, p) in [(1, 3), (1, 4), (2, 5), (2, 6)] {
            let rep = subsimplex_bubble_dims(n, rr, p).unwrap();
            assert!(rep.exact(), "{rep:?}");
        }
    }
}

#[test]
fn affine_invariance_of_verdicts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let e = element_def(Family::R2, 5, 0, 2).unwrap();
    let counts: Vec<usize> = (0..3).map(|d| e.dofs_per_entity(d)).collect();
    for _ in 0..5 {
        let s = random_simplex(&mut rng, 2);
        let r = unisolvence_check(&e, &s, UNISOLVENCE_TOL);
        assert!(r.pass);
        assert_eq!(counts, (0..3).map(|d| e.dofs_per_entity(d)).collect::<Vec<_>>());
    }
}
