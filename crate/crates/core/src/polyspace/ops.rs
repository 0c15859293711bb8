//! Dense matrices of the exact form operators.

use nalgebra::DMatrix;

use crate::combinatorics::{factorial, merge_sign, multi_factorial, subsets};

use super::form::{add_term, d_term, koszul_term, trace_term, FormSpace, Terms};

fn matrix_from_terms<F>(src: FormSpace, dst: FormSpace, mut op: F) -> DMatrix<f64>
where
    F: FnMut(&[usize], &[u32], &mut Terms),
{
    let mut m = DMatrix::zeros(dst.dim(), src.dim());
    if src.dim() == 0 || dst.dim() == 0 {
        return m;
    }
    let lookup = dst.component_lookup();
    let table = dst.table();
    for (j, (comp, alpha)) in src.basis_labels().iter().enumerate() {
        let mut out = Terms::new();
        op(comp, alpha, &mut out);
        for ((c, a), v) in out {
            if v != 0.0 {
                let row = dst.index(lookup[&c], table.index_of(&a).expect("degree mismatch"));
                m[(row, j)] += v;
            }
        }
    }
    m
}

/// d : P_pΛ^k -> P_{p-1}Λ^{k+1} in frame coordinates.
pub fn d_matrix(src: FormSpace) -> DMatrix<f64> {
    if src.k >= src.n {
        return DMatrix::zeros(0, src.dim());
    }
    let dst = FormSpace::new(src.n, src.degree - 1, src.k + 1);
    matrix_from_terms(src, dst, |c, a, out| d_term(src.n, c, a, 1.0, out))
}

/// κ : P_pΛ^k -> P_{p+1}Λ^{k-1}.
pub fn koszul_matrix(src: FormSpace) -> DMatrix<f64> {
    assert!(src.k >= 1, "Koszul contraction needs k >= 1");
    let dst = FormSpace::new(src.n, src.degree + 1, src.k - 1);
    matrix_from_terms(src, dst, |c, a, out| koszul_term(c, a, 1.0, out))
}

/// Multiplication by (Σ λ_i)^times.
pub fn homogenize_matrix(src: FormSpace, times: u32) -> DMatrix<f64> {
    let dst = src.with_degree(src.degree + times as i32);
    let n = src.n;
    matrix_from_terms(src, dst, |c, a, out| {
        let mut cur: Terms = Terms::new();
        add_term(&mut cur, c.to_vec(), a.to_vec(), 1.0);
        for _ in 0..times {
            let mut next = Terms::new();
            for ((comp, alpha), v) in &cur {
                for i in 0..=n {
                    let mut b = alpha.clone();
                    b[i] += 1;
                    add_term(&mut next, comp.clone(), b, *v);
                }
            }
            cur = next;
        }
        for (key, v) in cur {
            add_term(out, key.0, key.1, v);
        }
    })
}

/// Trace onto the sub-simplex on sorted cell vertex `positions`.
pub fn trace_matrix(src: FormSpace, positions: &[usize]) -> DMatrix<f64> {
    let d = positions.len() - 1;
    if src.k > d {
        return DMatrix::zeros(0, src.dim());
    }
    let dst = FormSpace::new(d, src.degree, src.k);
    matrix_from_terms(src, dst, |c, a, out| trace_term(c, a, 1.0, positions, out))
}

/// Oriented integral of λ^γ dλ_1∧...∧dλ_d over a d-simplex.
pub fn top_integral(gamma: &[u32]) -> f64 {
    let d = gamma.len() - 1;
    let total: u32 = gamma.iter().sum();
    multi_factorial(gamma) / factorial(total as usize + d)
}

/// Row r with r·u = ∫_f u ∧ η for u in `u_space` (k-forms on a d-simplex)
/// and η given in `eta_space` ((d-k)-forms).
pub fn wedge_row(u_space: FormSpace, eta_space: FormSpace, eta: &[f64]) -> Vec<f64> {
    assert_eq!(u_space.n, eta_space.n);
    assert_eq!(u_space.k + eta_space.k, u_space.n);
    let mut row = vec![0.0; u_space.dim()];
    if u_space.dim() == 0 || eta_space.dim() == 0 {
        return row;
    }
    let eta_labels = eta_space.basis_labels();
    let nonzero: Vec<(usize, f64)> = eta.iter().copied().enumerate().filter(|(_, v)| *v != 0.0).collect();
    for (i, (ci, alpha)) in u_space.basis_labels().iter().enumerate() {
        let mut acc = 0.0;
        for &(j, w) in &nonzero {
            let (cj, beta) = &eta_labels[j];
            let s = merge_sign(ci, cj);
            if s == 0 {
                continue;
            }
            let gamma: Vec<u32> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
            acc += w * s as f64 * top_integral(&gamma);
        }
        row[i] = acc;
    }
    row
}

/// Matrix taking frame coefficients (dλ_I) to Cartesian coefficients (dx_J):
/// entry (J, I) = det of the gradient rows I, columns J.
pub fn cartesian_matrix(n: usize, k: usize, gradients: &DMatrix<f64>) -> DMatrix<f64> {
    let ambient = gradients.ncols();
    let frame = subsets(&(1..=n).collect::<Vec<_>>(), k);
    let cart = subsets(&(0..ambient).collect::<Vec<_>>(), k);
    DMatrix::from_fn(cart.len(), frame.len(), |j, i| {
        minor(gradients, &frame[i], &cart[j])
    })
}

/// Matrix taking Cartesian coefficients (dx_J) to frame coefficients (dλ_I),
/// using dx_a = Σ_i (v_i - v_0)_a dλ_i.
pub fn frame_matrix(n: usize, k: usize, edge_matrix: &DMatrix<f64>) -> DMatrix<f64> {
    let ambient = edge_matrix.ncols();
    let frame = subsets(&(1..=n).collect::<Vec<_>>(), k);
    let cart = subsets(&(0..ambient).collect::<Vec<_>>(), k);
    // edge_matrix row i-1 holds v_i - v_0.
    let mut shifted = DMatrix::zeros(n + 1, ambient);
    shifted.view_mut((1, 0), (n, ambient)).copy_from(edge_matrix);
    DMatrix::from_fn(frame.len(), cart.len(), |i, j| minor(&shifted, &frame[i], &cart[j]))
}

fn minor(m: &DMatrix<f64>, rows: &[usize], cols: &[usize]) -> f64 {
    let k = rows.len();
    if k == 0 {
        return 1.0;
    }
    DMatrix::from_fn(k, k, |a, b| m[(rows[a], cols[b])]).determinant()
}
