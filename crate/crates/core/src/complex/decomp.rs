//! Space comparisons and the bubble decompositions of the H(div)/H(curl) spaces.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::space::{assemble_element, DiscreteSpace, GlobalSpace};
use crate::elements::{local_entities, trace_free_basis, DofClass, ElementDef, Family, Layout};
use crate::linalg;
use crate::mesh::{FrameRule, SimplicialMesh};
use crate::polyspace::ops;
use crate::{Error, Result};

pub const CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceComparison {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Normalized ‖C_B P_A‖_max and ‖C_A P_B‖_max.
    pub residual_a_in_b: f64,
    pub residual_b_in_a: f64,
    pub equal: bool,
}

fn constraint_residual(c: Option<&DMatrix<f64>>, basis: &DMatrix<f64>) -> f64 {
    match c {
        Some(c) if c.nrows() > 0 && basis.ncols() > 0 => {
            linalg::max_abs(&(linalg::normalize_rows(c) * linalg::normalize_columns(basis)))
        }
        _ => 0.0,
    }
}

pub fn space_equal(a: &DiscreteSpace, b: &DiscreteSpace) -> Result<SpaceComparison> {
    if a.space != b.space || a.n_cells != b.n_cells {
        return Err(Error::DimensionMismatch(format!("cannot compare {} with {}", a.label, b.label)));
    }
    let residual_a_in_b = constraint_residual(b.constraints.as_ref(), &a.basis);
    let residual_b_in_a = constraint_residual(a.constraints.as_ref(), &b.basis);
    let equal = a.dim() == b.dim() && residual_a_in_b < CONSTRAINT_TOL && residual_b_in_a < CONSTRAINT_TOL;
    Ok(SpaceComparison { dim_a: a.dim(), dim_b: b.dim(), residual_a_in_b, residual_b_in_a, equal })
}

/// Local bubbles of every cell, as columns on broken coordinates.
fn cell_bubbles(n_cells: usize, local: &DMatrix<f64>) -> DMatrix<f64> {
    let sd = local.nrows();
    let mut m = DMatrix::zeros(n_cells * sd, n_cells * local.ncols());
    for c in 0..n_cells {
        for j in 0..local.ncols() {
            for r in 0..sd {
                m[(c * sd + r, c * local.ncols() + j)] = local[(r, j)];
            }
        }
    }
    m
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub name: String,
    pub dim_target: usize,
    pub dim_smooth: usize,
    pub dim_bubbles: usize,
    /// rank of [smooth | bubbles].
    pub rank_sum: usize,
    /// rank of [target | smooth | bubbles].
    pub rank_union: usize,
    /// Normalized residual of the target constraints on the smooth part.
    pub smooth_residual: f64,
    /// Max relative trace of u − I^c u over all faces (3D only).
    pub split_residual: Option<f64>,
    pub holds: bool,
}

fn decomposition(
    name: &str,
    target: &GlobalSpace,
    smooth: &GlobalSpace,
    local_bubbles: &DMatrix<f64>,
) -> DecompositionReport {
    let t = target.basis_matrix();
    let s = smooth.basis_matrix();
    let b = cell_bubbles(target.n_cells, local_bubbles);
    let sum = linalg::hstack(&[&s, &b]);
    let rank_sum = linalg::rank(&sum);
    let rank_union = linalg::rank(&linalg::hstack(&[&t, &sum]));
    let smooth_residual = constraint_residual(Some(&target.constraint_matrix()), &s);
    let holds = rank_sum == target.dim() && rank_union == target.dim() && smooth_residual < CONSTRAINT_TOL;
    DecompositionReport {
        name: name.to_string(),
        dim_target: target.dim(),
        dim_smooth: smooth.dim(),
        dim_bubbles: b.ncols(),
        rank_sum,
        rank_union,
        smooth_residual,
        split_residual: None,
        holds,
    }
}

/// P_{1,p}Λ¹(T²) = vector Lagrange + H(div) bubbles.
pub fn verify_decomposition_2d(mesh: &SimplicialMesh, p: i32) -> Result<DecompositionReport> {
    let rule = FrameRule::default();
    let target = assemble_element(mesh, &ElementDef::new(Family::R1, p, 1, 2)?, &rule, false)?;
    let lagrange = assemble_element(mesh, &ElementDef::new(Family::VectorLagrange, p, 1, 2)?, &rule, false)?;
    let bubbles = trace_free_basis(2, p, 1)?;
    Ok(decomposition("stenberg = vector lagrange + bubbles", &target, &lagrange, &bubbles.matrix))
}

/// P_{2,p}Λ¹(T³) = vector Hermite + Σ^c bubbles, with the interpolation split.
pub fn verify_decomposition_3d(mesh: &SimplicialMesh, p: i32) -> Result<DecompositionReport> {
    let rule = FrameRule::default();
    let target = assemble_element(mesh, &ElementDef::new(Family::R2, p, 1, 3)?, &rule, false)?;
    let hermite = assemble_element(mesh, &ElementDef::new(Family::VectorHermite, p, 1, 3)?, &rule, false)?;
    let bubbles = crate::elements::sigma_c_basis(p)?;
    let mut rep = decomposition("r2 curl = vector hermite + sigma_c", &target, &hermite, &bubbles.matrix);
    let split = interpolation_split_residual(mesh, &target, p, &rule)?;
    rep.split_residual = Some(split);
    rep.holds &= split < CONSTRAINT_TOL;
    Ok(rep)
}

/// Hermite space written in the rotated face frame: the class layout of the
/// r=2 curl element with every DoF single valued.
pub fn rotated_hermite(mesh: &SimplicialMesh, p: i32, rule: &FrameRule) -> Result<GlobalSpace> {
    let elem = ElementDef::with_layout(Family::R2, p, 1, 3, Layout::Classes)?;
    assemble_element(mesh, &elem, rule, true)
}

/// I^c u keeps vertex jets, edge values and tangential face moments of u and
/// sets normal face moments and interior moments to zero; u − I^c u must be
/// a cell bubble. Returns the largest relative face trace of the difference.
pub fn interpolation_split_residual(mesh: &SimplicialMesh, target: &GlobalSpace, p: i32, rule: &FrameRule) -> Result<f64> {
    let herm = rotated_hermite(mesh, p, rule)?;
    let u = target.basis_matrix();
    let sd = target.space().dim();
    let mut values = DMatrix::zeros(herm.dim(), u.ncols());
    for (g, &(c, i)) in herm.owners.iter().enumerate() {
        let class = herm.elem.dofs[i].class;
        if matches!(class, DofClass::FaceNormal | DofClass::Interior) {
            continue;
        }
        let uc = u.rows(c * sd, sd);
        let row = herm.local_rows[c].row(i);
        values.set_row(g, &(row * uc));
    }
    let diff = &u - herm.basis_matrix() * values;
    let mut worst: f64 = 0.0;
    let scale = linalg::max_abs(&u).max(f64::MIN_POSITIVE);
    for c in 0..mesh.n_cells() {
        let dc = diff.rows(c * sd, sd).into_owned();
        for face in local_entities(3, 2) {
            let tr = ops::trace_matrix(target.space(), &face);
            worst = worst.max(linalg::max_abs(&(tr * &dc)) / scale);
        }
    }
    Ok(worst)
}
