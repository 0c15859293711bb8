//! Local finite elements: shape spaces, DoF functionals, unisolvence and dual bases.

mod bubbles;
mod dof;
mod families;
mod jets;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use bubbles::{
    bubble_basis, check_sigma_c, hdiv_bubble_basis, hdiv_bubble_formula, max_normal_trace_2d,
    max_tangential_trace_3d, sample_barycentric, sigma_c_basis, sigma_c_spanning_set, trace_free_basis, BubbleCheck,
};
pub use dof::{
    local_entities, proxy_weights, Action, CellContext, Continuity, DofClass, DofFunctional, DofKind, LocalEntity,
    Selector,
};
pub use families::{min_degree, Family, Layout};
pub use jets::{jet_complex_ranks, subsimplex_bubble_dims, BubbleDimReport, EntityBubbleCounts, JetReport};

use crate::linalg;
use crate::mesh::FrameRule;
use crate::polyspace::{dim_full, dim_trimmed, trimmed_matrix, BasisKind, FormPolynomial, FormSpace, Simplex, SpaceBasis};
use crate::{Error, Result};

/// Default threshold on the smallest relative singular value of the
/// equilibrated DoF matrix.
pub const UNISOLVENCE_TOL: f64 = 1e-6;

/// A finite element on a reference-free simplex: the DoFs are defined
/// through local vertex positions and are evaluated on any concrete simplex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ElementDef {
    pub family: Family,
    pub degree: i32,
    pub k: usize,
    pub n: usize,
    pub layout: Layout,
    /// Homogeneous coordinate space containing the shape space.
    pub space: FormSpace,
    /// Columns span the shape space inside `space`.
    #[serde(skip)]
    pub shape: DMatrix<f64>,
    pub dofs: Vec<DofFunctional>,
}

pub fn element_def(family: Family, p: i32, k: usize, n: usize) -> Result<ElementDef> {
    ElementDef::new(family, p, k, n)
}

impl ElementDef {
    pub fn new(family: Family, degree: i32, k: usize, n: usize) -> Result<Self> {
        Self::with_layout(family, degree, k, n, Layout::Moments)
    }

    pub fn with_layout(family: Family, degree: i32, k: usize, n: usize, layout: Layout) -> Result<Self> {
        families::check(family, degree, k, n)?;
        let space = FormSpace::new(n, degree, k);
        let shape = if families::uses_trimmed(family) {
            trimmed_matrix(n, degree, k)
        } else {
            DMatrix::identity(space.dim(), space.dim())
        };
        let dofs = families::expand(n, families::templates(family, layout, degree, k, n));
        Ok(ElementDef { family, degree, k, n, layout, space, shape, dofs })
    }

    pub fn shape_dim(&self) -> usize {
        self.shape.ncols()
    }

    /// Closed-form dimension of the shape space.
    pub fn expected_dim(&self) -> usize {
        if families::uses_trimmed(self.family) {
            dim_trimmed(self.n, self.degree, self.k)
        } else {
            dim_full(self.n, self.degree, self.k)
        }
    }

    pub fn shape_basis(&self) -> Result<SpaceBasis> {
        let kind = if families::uses_trimmed(self.family) { BasisKind::Trimmed } else { BasisKind::Full };
        SpaceBasis::new(self.space, kind, self.shape.clone())
    }

    /// Number of DoFs attached to one sub-simplex of dimension `d`.
    pub fn dofs_per_entity(&self, d: usize) -> usize {
        self.dofs.iter().filter(|f| f.entity.dim == d && f.entity.index == 0).count()
    }

    /// Local DoF indices attached to the given local sub-simplex.
    pub fn dofs_on(&self, entity: LocalEntity) -> Vec<usize> {
        (0..self.dofs.len()).filter(|&i| self.dofs[i].entity == entity).collect()
    }

    /// A copy with one DoF removed (for negative controls).
    pub fn without_dof(&self, i: usize) -> ElementDef {
        let mut e = self.clone();
        e.dofs.remove(i);
        e
    }

    pub fn label(&self) -> String {
        format!("family={} p={} k={} n={}", self.family, self.degree, self.k, self.n)
    }

    /// Human-readable listing of the DoFs.
    pub fn catalog(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "element {} layout={:?}", self.label(), self.layout);
        let _ = writeln!(s, "shape dimension {} , dofs {}", self.shape_dim(), self.dofs.len());
        for d in 0..=self.n {
            let _ = writeln!(s, "  per {}-simplex: {}", d, self.dofs_per_entity(d));
        }
        for (i, f) in self.dofs.iter().enumerate() {
            let what = match &f.action {
                Action::Jet { component, derivatives } => format!("jet {:?} d{:?}", component, derivatives),
                Action::ProxyMoment { component, derivative, test } => {
                    format!("moment {:?} deriv {:?} test λ^{:?}", component, derivative, test)
                }
                Action::TraceMoment { test_space, .. } => format!("trace moment against Λ^{}", test_space.k),
            };
            let _ = writeln!(
                s,
                "{:4} {:?} on {}-simplex #{} test degree {} {:?} {:?} : {}",
                i, f.kind, f.entity.dim, f.entity.index, f.test_degree, f.continuity, f.class, what
            );
        }
        s
    }
}

/// DoF_i applied to shape basis member j.
pub fn dof_matrix(elem: &ElementDef, simplex: &Simplex) -> DMatrix<f64> {
    dof_matrix_with(elem, simplex, &FrameRule::default())
}

pub fn dof_matrix_with(elem: &ElementDef, simplex: &Simplex, rule: &FrameRule) -> DMatrix<f64> {
    let ctx = CellContext::new(simplex, rule);
    ctx.dof_rows(elem.space, &elem.dofs) * &elem.shape
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnisolvenceReport {
    pub pass: bool,
    pub n_dofs: usize,
    pub shape_dim: usize,
    pub rank: usize,
    /// Smallest over largest singular value of the equilibrated DoF matrix.
    pub min_relative_singular_value: f64,
    /// Closed-form dimension of the shape space.
    pub expected_dim: usize,
    pub dimension_identity: bool,
}

pub fn unisolvence_check(elem: &ElementDef, simplex: &Simplex, tol: f64) -> UnisolvenceReport {
    let m = dof_matrix(elem, simplex);
    let eq = linalg::normalize_columns(&linalg::normalize_rows(&m));
    let sv = linalg::singular_values(&eq);
    let largest = sv.first().copied().unwrap_or(0.0);
    let ratio = if largest > 0.0 && m.nrows() == m.ncols() { sv[sv.len() - 1] / largest } else { 0.0 };
    let rank = linalg::rank_with(&eq, linalg::RANK_TOL);
    let expected = elem.expected_dim();
    let dimension_identity = expected == elem.dofs.len() && expected == elem.shape_dim();
    UnisolvenceReport {
        pass: m.nrows() == m.ncols() && rank == m.ncols() && ratio > tol,
        n_dofs: m.nrows(),
        shape_dim: m.ncols(),
        rank,
        min_relative_singular_value: ratio,
        expected_dim: expected,
        dimension_identity,
    }
}

/// Basis of the shape space dual to the DoFs on one simplex.
#[derive(Clone, Debug)]
pub struct DualBasis {
    pub label: String,
    pub space: FormSpace,
    /// Column j holds the coordinates of basis function j in `space`.
    pub coeffs: DMatrix<f64>,
    pub classes: Vec<DofClass>,
}

impl DualBasis {
    pub fn len(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.ncols() == 0
    }

    pub fn member(&self, j: usize) -> FormPolynomial {
        let col: Vec<f64> = self.coeffs.column(j).iter().copied().collect();
        FormPolynomial::from_dense(self.space, &col)
    }

    pub fn members(&self) -> Vec<FormPolynomial> {
        (0..self.len()).map(|j| self.member(j)).collect()
    }

    /// Indices of basis functions by class.
    pub fn grouped(&self) -> BTreeMap<String, Vec<usize>> {
        let mut out: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            out.entry(format!("{c:?}")).or_default().push(i);
        }
        out
    }
}

pub fn dual_basis(elem: &ElementDef, simplex: &Simplex) -> Result<DualBasis> {
    let m = dof_matrix(elem, simplex);
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{} DoFs for a shape space of dimension {}",
            m.nrows(),
            m.ncols()
        )));
    }
    let report = unisolvence_check(elem, simplex, 0.0);
    if report.rank < m.ncols() {
        return Err(Error::Singular(report.min_relative_singular_value));
    }
    let inv = m.clone().lu().try_inverse().ok_or(Error::Singular(report.min_relative_singular_value))?;
    Ok(DualBasis {
        label: elem.label(),
        space: elem.space,
        coeffs: &elem.shape * inv,
        classes: elem.dofs.iter().map(|d| d.class).collect(),
    })
}

/// max |DoF_i(φ_j) − δ_ij|.
pub fn kronecker_residual(elem: &ElementDef, simplex: &Simplex, basis: &DualBasis) -> f64 {
    let ctx_rule = FrameRule::default();
    let ctx = CellContext::new(simplex, &ctx_rule);
    let rows = ctx.dof_rows(elem.space, &elem.dofs);
    let prod = rows * &basis.coeffs;
    let id = DMatrix::<f64>::identity(prod.nrows(), prod.ncols());
    linalg::max_abs(&(prod - id))
}
