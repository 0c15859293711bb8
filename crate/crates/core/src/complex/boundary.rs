//! Spaces with homogeneous boundary conditions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::space::{local_positions, DiscreteSpace, GlobalSpace};
use crate::elements::Family;
use crate::linalg;
use crate::mesh::{BoundaryClassification, SimplicialMesh};
use crate::polyspace::{integrate_monomial, ops, MultiIndex};
use crate::Result;

#[derive(Clone, Debug)]
pub struct HomogeneousSpace {
    pub space: DiscreteSpace,
    /// Dimension with vanishing trace on the boundary (mean zero for top forms).
    pub dim: usize,
    /// Dimension predicted by removing boundary DoFs, where a rule is known.
    pub rule_dim: Option<usize>,
    pub full_dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundaryCounts {
    pub v0: usize,
    pub v0s: usize,
    pub e0: usize,
}

pub fn boundary_counts(c: &BoundaryClassification, mesh: &SimplicialMesh) -> BoundaryCounts {
    let e0 = if mesh.dim() == 2 {
        (0..mesh.count(1)).filter(|&e| mesh.is_boundary(1, e)).count()
    } else {
        c.boundary_edges.len()
    };
    BoundaryCounts { v0: c.v0(), v0s: c.v0s(), e0 }
}

/// Number of DoFs removed by the boundary rules for the 2D r=1 sequence.
pub fn removed_dofs_2d(k: usize, p: i32, counts: &BoundaryCounts) -> Option<i64> {
    let (v0, v0s, e0) = (counts.v0 as i64, counts.v0s as i64, counts.e0 as i64);
    let p = p as i64;
    match k {
        0 => Some((p - 3) * e0 + 3 * v0 - v0s),
        1 => Some((p - 1) * e0 + 2 * v0 - v0s),
        2 => Some(1),
        _ => None,
    }
}

/// Rows whose null space is the homogeneous subspace, on broken coordinates.
fn boundary_rows(mesh: &SimplicialMesh, k: usize, space: crate::polyspace::FormSpace) -> DMatrix<f64> {
    let n = mesh.dim();
    let sd = space.dim();
    let broken = mesh.n_cells() * sd;
    if k < n {
        let mut blocks: Vec<(usize, DMatrix<f64>)> = Vec::new();
        for f in 0..mesh.count(n - 1) {
            if !mesh.is_boundary(n - 1, f) {
                continue;
            }
            let c = mesh.cofaces_of(n - 1, f)[0];
            let pos = local_positions(&mesh.cells()[c], &mesh.simplices(n - 1)[f]);
            blocks.push((c, ops::trace_matrix(space, &pos)));
        }
        let total: usize = blocks.iter().map(|(_, b)| b.nrows()).sum();
        let mut m = DMatrix::zeros(total, broken);
        let mut r0 = 0;
        for (c, b) in blocks {
            for i in 0..b.nrows() {
                for j in 0..sd {
                    m[(r0 + i, c * sd + j)] = b[(i, j)];
                }
            }
            r0 += b.nrows();
        }
        m
    } else {
        // ∫ u over the domain, with u = f dλ_1∧…∧dλ_n = f det(∇λ) dx on each cell
        let mut m = DMatrix::zeros(1, broken);
        let table = space.table();
        for c in 0..mesh.n_cells() {
            let s = mesh.cell_simplex(c);
            let g = s.gradients();
            let det = g.rows(1, n).into_owned().determinant();
            for (i, alpha) in table.list.iter().enumerate() {
                m[(0, c * sd + i)] = det * integrate_monomial(&s, &MultiIndex(alpha.clone()));
            }
        }
        m
    }
}

pub fn restrict_homogeneous(
    mesh: &SimplicialMesh,
    space: &GlobalSpace,
    classification: &BoundaryClassification,
) -> Result<HomogeneousSpace> {
    let disc = space.to_discrete();
    let rows = boundary_rows(mesh, space.elem.k, space.space());
    let on_boundary = &rows * &disc.basis;
    let null = linalg::nullspace(&on_boundary);
    let basis = &disc.basis * &null;
    let rule_dim = if mesh.dim() == 2 && space.elem.family == Family::R1 {
        let counts = boundary_counts(classification, mesh);
        removed_dofs_2d(space.elem.k, space.elem.degree, &counts).map(|r| (space.dim() as i64 - r) as usize)
    } else {
        None
    };
    let dim = basis.ncols();
    Ok(HomogeneousSpace {
        space: DiscreteSpace {
            label: format!("{} homogeneous", space.label()),
            n: disc.n,
            k: disc.k,
            space: disc.space,
            n_cells: disc.n_cells,
            basis,
            constraints: None,
        },
        dim,
        rule_dim,
        full_dim: space.dim(),
    })
}
