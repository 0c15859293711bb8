//! Trace-free (bubble) subspaces of full polynomial form spaces.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::dof::local_entities;
use super::ElementDef;
use crate::combinatorics::{binomial, monomials};
use crate::linalg;
use crate::polyspace::{ops, BasisKind, FormPolynomial, FormSpace, Simplex, SpaceBasis};
use crate::Result;

/// Columns λ^β λ_j λ_l λ_m dλ_i, {i,j,l,m} = {0,1,2,3}, |β| = p − 3, in P_pΛ¹(T³).
pub fn sigma_c_spanning_set(p: i32) -> DMatrix<f64> {
    let space = FormSpace::new(3, p, 1);
    if p < 3 {
        return DMatrix::zeros(space.dim(), 0);
    }
    let table = space.table();
    let nmon = space.n_monomials();
    let betas = monomials(4, (p - 3) as usize);
    let mut cols = Vec::new();
    for i in 0..4 {
        for beta in &betas.list {
            let mut alpha = beta.clone();
            for (j, a) in alpha.iter_mut().enumerate() {
                if j != i {
                    *a += 1;
                }
            }
            let m = table.index_of(&alpha).expect("degree p monomial");
            let mut col = vec![0.0; space.dim()];
            if i == 0 {
                for c in 0..3 {
                    col[c * nmon + m] = -1.0;
                }
            } else {
                col[(i - 1) * nmon + m] = 1.0;
            }
            cols.push(col);
        }
    }
    DMatrix::from_fn(space.dim(), cols.len(), |r, c| cols[c][r])
}

pub fn sigma_c_basis(p: i32) -> Result<SpaceBasis> {
    let span = sigma_c_spanning_set(p);
    let keep = linalg::independent_columns(&span);
    SpaceBasis::new(FormSpace::new(3, p, 1), BasisKind::Bubble, linalg::select_columns(&span, &keep))
}

/// Orthonormal basis of forms in P_pΛ^k(T^n) whose traces on all facets vanish.
pub fn trace_free_basis(n: usize, p: i32, k: usize) -> Result<SpaceBasis> {
    let space = FormSpace::new(n, p, k);
    let mut blocks = Vec::new();
    if k < n {
        for facet in local_entities(n, n - 1) {
            blocks.push(ops::trace_matrix(space, &facet));
        }
    }
    let refs: Vec<&DMatrix<f64>> = blocks.iter().collect();
    let matrix = if refs.is_empty() {
        DMatrix::identity(space.dim(), space.dim())
    } else {
        linalg::nullspace(&linalg::vstack(&refs))
    };
    SpaceBasis::new(space, BasisKind::Bubble, matrix)
}

/// H(div) bubbles of P_pΛ¹(T²): zero normal trace on every edge.
pub fn hdiv_bubble_basis(p: i32) -> Result<SpaceBasis> {
    trace_free_basis(2, p, 1)
}

/// Bubble space of the element's shape space.
pub fn bubble_basis(elem: &ElementDef, _simplex: &Simplex) -> Result<SpaceBasis> {
    match (elem.n, elem.k) {
        (3, 1) => sigma_c_basis(elem.degree),
        (n, k) => trace_free_basis(n, elem.degree, k),
    }
}

/// Deterministic well-spread points in the open standard simplex of dimension d.
pub fn sample_barycentric(d: usize, count: usize) -> Vec<Vec<f64>> {
    let gen = [0.754_877_666_246_692_7, 0.569_840_290_998_053_2, 0.430_159_709_001_946_8];
    (1..=count)
        .map(|i| {
            // Kraemer-style fold of a Kronecker sequence onto the simplex
            let mut u: Vec<f64> = (0..d).map(|a| (0.5 + i as f64 * gen[a % 3]).fract()).collect();
            u.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut bary = Vec::with_capacity(d + 1);
            let mut prev = 0.0;
            for &x in &u {
                bary.push(x - prev);
                prev = x;
            }
            bary.push(1.0 - prev);
            bary
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BubbleCheck {
    pub p: i32,
    pub spanning_rank: usize,
    pub trace_free_rank: usize,
    pub joint_rank: usize,
    /// ½(p³ − 2p² − p + 2).
    pub formula: i64,
    /// Largest |tangential trace| of a basis member over the sample points.
    pub max_sampled_trace: f64,
}

impl BubbleCheck {
    pub fn ranks_agree(&self) -> bool {
        self.spanning_rank == self.trace_free_rank && self.joint_rank == self.spanning_rank
    }
}

fn face_normal(points: &[Vec<f64>]) -> Vec<f64> {
    let a: Vec<f64> = (0..3).map(|i| points[1][i] - points[0][i]).collect();
    let b: Vec<f64> = (0..3).map(|i| points[2][i] - points[0][i]).collect();
    let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    c.iter().map(|x| x / norm).collect()
}

/// Max |tangential part| of 1-forms on all faces of a tetrahedron.
pub fn max_tangential_trace_3d(simplex: &Simplex, members: &[FormPolynomial], per_face: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for face in local_entities(3, 2) {
        let nu = face_normal(simplex.sub(&face).points());
        for local in sample_barycentric(2, per_face) {
            let mut bary = vec![0.0; 4];
            for (l, &pos) in face.iter().enumerate() {
                bary[pos] = local[l];
            }
            let x = simplex.point_at(&bary);
            for m in members {
                let w = m.evaluate(simplex, &x);
                let dot: f64 = (0..3).map(|i| w[i] * nu[i]).sum();
                for i in 0..3 {
                    worst = worst.max((w[i] - dot * nu[i]).abs());
                }
            }
        }
    }
    worst
}

/// Max |B·ν| over all edges of a triangle, B = (−ω₂, ω₁).
pub fn max_normal_trace_2d(simplex: &Simplex, members: &[FormPolynomial], per_edge: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for edge in local_entities(2, 1) {
        let pts = simplex.sub(&edge);
        let t: Vec<f64> = (0..2).map(|i| pts.points()[1][i] - pts.points()[0][i]).collect();
        let len = (t[0] * t[0] + t[1] * t[1]).sqrt();
        let nu = [-t[1] / len, t[0] / len];
        for s in 1..=per_edge {
            let a = s as f64 / (per_edge + 1) as f64;
            let mut bary = vec![0.0; 3];
            bary[edge[0]] = 1.0 - a;
            bary[edge[1]] = a;
            let x = simplex.point_at(&bary);
            for m in members {
                let w = m.evaluate(simplex, &x);
                worst = worst.max((-w[1] * nu[0] + w[0] * nu[1]).abs());
            }
        }
    }
    worst
}

/// Two-sided comparison of the Σ^c spanning set with the trace-free space.
pub fn check_sigma_c(simplex: &Simplex, p: i32, per_face: usize) -> Result<BubbleCheck> {
    let span = sigma_c_spanning_set(p);
    let free = trace_free_basis(3, p, 1)?;
    let spanning_rank = linalg::rank(&span);
    let joint = linalg::hstack(&[&span, &free.matrix]);
    let basis = sigma_c_basis(p)?;
    let max_sampled_trace = max_tangential_trace_3d(simplex, &basis.members(), per_face);
    let p64 = p as i64;
    Ok(BubbleCheck {
        p,
        spanning_rank,
        trace_free_rank: free.len(),
        joint_rank: linalg::rank(&joint),
        formula: (p64.pow(3) - 2 * p64 * p64 - p64 + 2) / 2,
        max_sampled_trace,
    })
}

/// Count of the H(div) bubbles of P_pΛ¹(T²): (p+1)(p−1).
pub fn hdiv_bubble_formula(p: i32) -> i64 {
    2 * binomial(p as i64 + 2, 2) - 3 * (p as i64 + 1)
}
