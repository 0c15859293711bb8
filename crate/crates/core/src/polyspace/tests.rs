use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::combinatorics::subsets;

fn random_form(rng: &mut ChaCha8Rng, n: usize, k: usize, p: i32) -> FormPolynomial {
    let space = FormSpace::new(n, p, k);
    let v: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-2..=2) as f64).collect();
    FormPolynomial::from_dense(space, &v)
}

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Simplex {
    loop {
        let pts: Vec<Vec<f64>> = (0..=n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
        let s = Simplex::new(pts).unwrap();
        if s.signed_volume().abs() > 0.05 {
            return s;
        }
    }
}

#[test]
fn full_and_trimmed_dimensions() {
    assert_eq!(dim_full(3, 2, 0), 10);
    assert_eq!(dim_full(2, 1, 2), 3);
    assert_eq!(dim_full(2, -1, 1), 0);
    for p in 1..8 {
        assert_eq!(dim_trimmed(2, p - 1, 1) as i64, if p >= 2 { (p as i64 - 1) * (p as i64 + 1) } else { 0 });
        let q = p as i64;
        assert_eq!(dim_trimmed(3, p - 2, 2) as i64, if p >= 3 { (q - 2) * (q - 1) * (q + 1) / 2 } else { 0 });
        assert_eq!(dim_trimmed(3, p, 0), dim_full(3, p, 0));
    }
}

#[test]
fn monomial_integrals_match_hand_values() {
    let tri = Simplex::reference(2);
    let tet = Simplex::reference(3);
    assert!((integrate_monomial(&tri, &MultiIndex(vec![0, 0, 0])) - 0.5).abs() < 1e-15);
    assert!((integrate_monomial(&tri, &MultiIndex(vec![1, 0, 0])) - 1.0 / 6.0).abs() < 1e-15);
    assert!((integrate_monomial(&tet, &MultiIndex(vec![1, 1, 0, 0])) - 1.0 / 120.0).abs() < 1e-15);
}

#[test]
fn monomial_integrals_agree_with_monte_carlo() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=3 {
        let s = random_simplex(&mut rng, n);
        for _ in 0..4 {
            let alpha: Vec<u32> = (0..=n).map(|_| rng.gen_range(0..3)).collect();
            let samples = 40_000;
            let mut vals = Vec::with_capacity(samples);
            for _ in 0..samples {
                // Uniform point in the simplex via sorted exponential spacings.
                let e: Vec<f64> = (0..=n).map(|_| -rng.gen_range(1e-12f64..1.0).ln()).collect();
                let total: f64 = e.iter().sum();
                let lam: Vec<f64> = e.iter().map(|x| x / total).collect();
                vals.push(alpha.iter().zip(&lam).map(|(&a, &l)| l.powi(a as i32)).product::<f64>());
            }
            let mean = vals.iter().sum::<f64>() / samples as f64;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples as f64 - 1.0);
            let est = mean * s.measure();
            let sigma = (var / samples as f64).sqrt() * s.measure();
            let exact = integrate_monomial(&s, &MultiIndex(alpha.clone()));
            assert!((est - exact).abs() <= 3.0 * sigma + 1e-12, "alpha {alpha:?}: {est} vs {exact}");
        }
    }
}

#[test]
fn trimmed_bases_have_the_right_size() {
    for n in 1..=3 {
        let s = Simplex::reference(n);
        for k in 0..=n {
            for p in 1..=6 {
                let b = trimmed_basis(&s, p, k).unwrap();
                assert_eq!(b.len(), dim_trimmed(n, p, k), "n={n} k={k} p={p}");
                if k == n {
                    // P⁻_pΛ^n = P_{p-1}Λ^n
                    assert_eq!(b.len(), dim_full(n, p - 1, n));
                }
            }
        }
    }
    assert_eq!(trimmed_basis(&Simplex::reference(2), 1, 1).unwrap().len(), 3);
    assert_eq!(trimmed_basis(&Simplex::reference(3), 1, 2).unwrap().len(), 4);
}

/// Top-degree part in x - v_0: substitute λ_0 = -(λ_1 + ... + λ_n).
fn top_part(space: FormSpace, v: &[f64]) -> FormPolynomial {
    let f = FormPolynomial::from_dense(space, v);
    let mut acc = FormPolynomial::zero(space.n, space.k, space.degree);
    for (ci, list) in f.components.iter().enumerate() {
        let comp = &space.components()[ci];
        for (a, c) in list {
            let mut cur = FormPolynomial::monomial(space.n, comp, &{
                let mut b = a.0.clone();
                b[0] = 0;
                b
            }, *c);
            for _ in 0..a.0[0] {
                let mut next = FormPolynomial::zero(space.n, space.k, cur.degree + 1);
                for i in 1..=space.n {
                    let mut shifted = cur.clone();
                    for l in shifted.components.iter_mut() {
                        for (m, coef) in l.iter_mut() {
                            m.0[i] += 1;
                            *coef = -*coef;
                        }
                    }
                    shifted.degree += 1;
                    next = next.add(&shifted).unwrap();
                }
                cur = next;
            }
            acc = acc.add(&cur).unwrap();
        }
    }
    acc
}

#[test]
fn trimmed_members_have_koszul_closed_top_part() {
    // Independent characterization: ω ∈ P⁻_pΛ^k iff the degree-p part of ω in
    // x - v_0 is annihilated by κ.
    for n in 2..=3 {
        for k in 1..=n {
            for p in 1..=4 {
                let m = trimmed_matrix(n, p, k);
                let space = FormSpace::new(n, p, k);
                for j in 0..m.ncols() {
                    let top = top_part(space, m.column(j).as_slice());
                    assert!(top.koszul().unwrap().is_zero(), "n={n} k={k} p={p}");
                }
                // And the full space has strictly more top parts outside ker κ.
                if k < n || p > 0 {
                    let e = (0..space.dim()).find(|&i| {
                        let mut v = vec![0.0; space.dim()];
                        v[i] = 1.0;
                        !top_part(space, &v).koszul().unwrap().is_zero()
                    });
                    assert!(e.is_some() || m.ncols() == space.dim());
                }
            }
        }
    }
}

#[test]
fn dd_vanishes_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1usize..=3 {
        for k in 0..n.saturating_sub(1) {
            for _ in 0..100 {
                let p = rng.gen_range(0..6);
                let f = random_form(&mut rng, n, k, p);
                let dd = f.exterior_derivative().unwrap().exterior_derivative().unwrap();
                assert!(dd.is_zero(), "n={n} k={k}: {dd}");
            }
        }
    }
    let f = FormPolynomial::monomial(3, &[], &[2, 1, 0, 0], 1.0);
    assert!(f.exterior_derivative().unwrap().exterior_derivative().unwrap().is_zero());
    let c = FormPolynomial::monomial(2, &[], &[0, 0, 0], 3.0);
    assert!(c.exterior_derivative().unwrap().is_zero());
    assert!(FormPolynomial::monomial(2, &[1, 2], &[0, 0, 0], 1.0).exterior_derivative().is_err());
}

/// Centered-difference oracle for d on Cartesian components.
fn fd_exterior_derivative(f: &FormPolynomial, s: &Simplex, x: &[f64]) -> Vec<f64> {
    let n = f.n;
    let h = 1e-5;
    let cart_k = subsets(&(0..n).collect::<Vec<_>>(), f.k);
    let cart_k1 = subsets(&(0..n).collect::<Vec<_>>(), f.k + 1);
    let mut grads = vec![vec![0.0; cart_k.len()]; n];
    for a in 0..n {
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[a] += h;
        xm[a] -= h;
        let vp = f.evaluate(s, &xp);
        let vm = f.evaluate(s, &xm);
        for j in 0..cart_k.len() {
            grads[a][j] = (vp[j] - vm[j]) / (2.0 * h);
        }
    }
    cart_k1
        .iter()
        .map(|jset| {
            let mut acc = 0.0;
            for (m, &a) in jset.iter().enumerate() {
                let rest: Vec<usize> = jset.iter().copied().filter(|&b| b != a).collect();
                let idx = cart_k.iter().position(|c| *c == rest).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                acc += sign * grads[a][idx];
            }
            acc
        })
        .collect()
}

#[test]
fn exterior_derivative_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        let s = random_simplex(&mut rng, n);
        for k in 0..n {
            let f = random_form(&mut rng, n, k, 3);
            let df = f.exterior_derivative().unwrap();
            for _ in 0..20 {
                let e: Vec<f64> = (0..=n).map(|_| rng.gen_range(0.1..1.0)).collect();
                let t: f64 = e.iter().sum();
                let x = s.point_at(&e.iter().map(|v| v / t).collect::<Vec<_>>());
                let exact = df.evaluate(&s, &x);
                let approx = fd_exterior_derivative(&f, &s, &x);
                let scale = exact.iter().fold(1.0f64, |a, v| a.max(v.abs()));
                for (a, b) in exact.iter().zip(&approx) {
                    assert!((a - b).abs() / scale < 1e-6, "n={n} k={k}: {a} vs {b}");
                }
            }
        }
    }
}

#[test]
fn curl_of_cubic_bubble_is_divergence_free() {
    let s = Simplex::new(vec![vec![0.0, 0.0], vec![2.0, 0.3], vec![0.4, 1.5]]).unwrap();
    let bubble = FormPolynomial::monomial(2, &[], &[1, 1, 1], 1.0);
    let grad = bubble.exterior_derivative().unwrap();
    assert_eq!(grad.degree, 2);
    // curl = rotated gradient (-∂_2 b, ∂_1 b); check div by central differences.
    let h = 1e-5;
    let curl = |x: &[f64]| {
        let g = grad.evaluate(&s, x);
        [-g[1], g[0]]
    };
    for bary in [[0.2, 0.3, 0.5], [0.6, 0.1, 0.3], [0.25, 0.25, 0.5]] {
        let x = s.point_at(&bary);
        let div = (curl(&[x[0] + h, x[1]])[0] - curl(&[x[0] - h, x[1]])[0]) / (2.0 * h)
            + (curl(&[x[0], x[1] + h])[1] - curl(&[x[0], x[1] - h])[1]) / (2.0 * h);
        assert!(div.abs() < 1e-6);
    }
}

#[test]
fn koszul_homotopy_formula_on_vertex_homogeneous_forms() {
    // For forms homogeneous of degree p in x - v_0 (no λ_0 factor),
    // (dκ + κd)ω = (p + k)ω.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..=3 {
        for k in 1..=n {
            for p in 0..4 {
                let space = FormSpace::new(n, p, k);
                let v: Vec<f64> = space
                    .basis_labels()
                    .iter()
                    .map(|(_, a)| if a[0] == 0 { rng.gen_range(-3..=3) as f64 } else { 0.0 })
                    .collect();
                let w = FormPolynomial::from_dense(space, &v);
                let dk = w.koszul().unwrap().exterior_derivative().unwrap();
                let lhs = if k < n { dk.add(&w.exterior_derivative().unwrap().koszul().unwrap()).unwrap() } else { dk };
                let rhs = w.scale((p as usize + k) as f64);
                let diff = lhs.add(&rhs.scale(-1.0)).unwrap();
                assert!(diff.is_zero(), "n={n} k={k} p={p}");
            }
        }
    }
}

#[test]
fn trace_commutes_with_d() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let faces: [&[usize]; 4] = [&[0, 1, 2], &[0, 2, 3], &[1, 2, 3], &[1, 3]];
    for k in 0..2 {
        let f = random_form(&mut rng, 3, k, 3);
        for face in faces {
            let lhs = f.exterior_derivative().unwrap().trace(face);
            let rhs = if k + 1 < face.len() { f.trace(face).exterior_derivative().unwrap() } else { lhs.clone() };
            assert_eq!(lhs.add(&rhs.scale(-1.0)).unwrap().is_zero(), true);
        }
    }
}

#[test]
fn trace_agrees_with_pullback_evaluation() {
    // On an embedded face, the trace of a 1-form evaluated on the face
    // tangent equals the ambient form evaluated on that tangent.
    let s = Simplex::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.2, 0.0], vec![0.1, 1.3, 0.2], vec![0.3, 0.2, 1.1]]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let f = random_form(&mut rng, 3, 1, 2);
    let face = [1usize, 2, 3];
    let tr = f.trace(&face);
    let bary_face = [0.2, 0.5, 0.3];
    let mut bary = vec![0.0; 4];
    for (i, &p) in face.iter().enumerate() {
        bary[p] = bary_face[i];
    }
    let x = s.point_at(&bary);
    let cart = f.evaluate(&s, &x);
    // Tangent v_2 - v_1 pairs with dλ'_1 only.
    let t: Vec<f64> = (0..3).map(|a| s.points()[2][a] - s.points()[1][a]).collect();
    let ambient: f64 = (0..3).map(|a| cart[a] * t[a]).sum();
    let vals = tr.frame_values(&bary_face);
    assert!((ambient - vals[0]).abs() < 1e-12);
}

#[test]
fn text_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let space = FormSpace::new(3, 2, 1);
    let v: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let f = FormPolynomial::from_dense(space, &v);
    let g = FormPolynomial::from_text(&f.to_text()).unwrap();
    assert_eq!(f, g);
    assert!(FormPolynomial::from_text("form n=2 k=3 p=1\n").is_err());
    assert!(FormPolynomial::from_text("form n=2 k=1 p=1\n0 | 1 0 | 1.0\n").is_err());
}

#[test]
fn cartesian_and_frame_matrices_are_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for n in 1..=3 {
        let s = random_simplex(&mut rng, n);
        for k in 0..=n {
            let c = ops::cartesian_matrix(n, k, &s.gradients());
            let f = ops::frame_matrix(n, k, &s.edge_matrix());
            let id = &c * &f;
            let e = id - nalgebra::DMatrix::<f64>::identity(c.nrows(), c.nrows());
            assert!(linalg::max_abs(&e) < 1e-10);
        }
    }
}
