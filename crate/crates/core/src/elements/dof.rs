//! DoF functionals and their evaluation on a concrete simplex.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::combinatorics::subsets;
use crate::mesh::{Frame, FrameRule};
use crate::polyspace::scalar::{self, ScalarPoly};
use crate::polyspace::{ops, FormSpace, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DofKind {
    PointValue,
    PointDerivative { order: usize },
    EdgeMoment,
    FaceMoment,
    InteriorMoment,
}

/// Whether a global DoF is shared by all cells around its sub-simplex or
/// duplicated in each of them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Continuity {
    SingleValued,
    PerCell,
}

/// Basis classes used to group dual basis functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DofClass {
    Vertex,
    Edge,
    EdgeNormal,
    EdgeTangential,
    Face,
    FaceNormal,
    FaceTangential,
    Interior,
}

/// Direction or component selector, resolved against the frame of the
/// sub-simplex the DoF lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selector {
    /// The only component of a 0-form or top form.
    Scalar,
    Axis(usize),
    EdgeTangent,
    EdgeNormal(usize),
    FaceNormal,
    FaceTangent(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Action {
    /// Derivatives of a proxy component at a vertex.
    Jet { component: Selector, derivatives: Vec<Selector> },
    /// ∫_f ∂(proxy component) · λ^β with respect to the measure of f.
    ProxyMoment { component: Selector, derivative: Option<Selector>, test: Vec<u32> },
    /// ∫_f tr u ∧ η for a (d-k)-form η on f.
    TraceMoment { test_space: FormSpace, test: Vec<f64> },
}

/// Position of a sub-simplex inside a cell: the `index`-th ascending
/// (dim+1)-subset of the cell's vertex positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalEntity {
    pub dim: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DofFunctional {
    pub kind: DofKind,
    pub entity: LocalEntity,
    pub action: Action,
    pub continuity: Continuity,
    pub class: DofClass,
    /// Polynomial degree of the test function (0 for point DoFs).
    pub test_degree: i32,
}

pub fn local_entities(n: usize, dim: usize) -> Vec<Vec<usize>> {
    subsets(&(0..=n).collect::<Vec<_>>(), dim + 1)
}

/// Weights on Cartesian form components (dx_J, J lexicographic) that pick out
/// proxy · v. The 2D 1-form proxy is the H(div) rotation (-ω_2, ω_1).
pub fn proxy_weights(n: usize, k: usize, v: &[f64]) -> Vec<f64> {
    match (n, k) {
        (_, 0) => vec![1.0],
        (n, k) if k == n => vec![1.0],
        (2, 1) => vec![v[1], -v[0]],
        (3, 1) => v.to_vec(),
        (3, 2) => vec![v[2], -v[1], v[0]],
        _ => unreachable!("all (n, k) with n <= 3 are covered"),
    }
}

/// Geometry of one cell needed to evaluate DoFs.
pub struct CellContext<'a> {
    pub simplex: &'a Simplex,
    pub rule: &'a FrameRule,
    grads: DMatrix<f64>,
}

impl<'a> CellContext<'a> {
    pub fn new(simplex: &'a Simplex, rule: &'a FrameRule) -> Self {
        CellContext { simplex, rule, grads: simplex.gradients() }
    }

    pub fn gradients(&self) -> &DMatrix<f64> {
        &self.grads
    }

    fn entity_positions(&self, e: LocalEntity) -> Vec<usize> {
        local_entities(self.simplex.dim(), e.dim)[e.index].clone()
    }

    fn frame(&self, positions: &[usize]) -> Option<Frame> {
        let d = positions.len() - 1;
        if d == 0 || d == self.simplex.ambient() {
            return None;
        }
        Some(Frame::for_points(self.simplex.sub(positions).points(), self.rule))
    }

    fn vector(&self, sel: Selector, frame: Option<&Frame>) -> Vec<f64> {
        let n = self.simplex.ambient();
        let f = || frame.expect("frame selector on a sub-simplex without a frame");
        match sel {
            Selector::Scalar => vec![0.0; n],
            Selector::Axis(a) => (0..n).map(|b| if a == b { 1.0 } else { 0.0 }).collect(),
            Selector::EdgeTangent => f().tangents[0].clone(),
            Selector::EdgeNormal(i) => f().normals[i].clone(),
            Selector::FaceNormal => f().normals[0].clone(),
            Selector::FaceTangent(i) => f().tangents[i].clone(),
        }
    }

    /// Frame-component weights w_I such that Σ w_I f_I = proxy(f) · v.
    fn frame_weights(&self, space: FormSpace, sel: Selector, frame: Option<&Frame>) -> Vec<f64> {
        let v = self.vector(sel, frame);
        let cart = proxy_weights(space.n, space.k, &v);
        let c = ops::cartesian_matrix(space.n, space.k, &self.grads);
        (0..c.ncols()).map(|i| (0..c.nrows()).map(|j| cart[j] * c[(j, i)]).sum()).collect()
    }

    /// Row vector of the functional acting on coordinates of `space`.
    pub fn dof_row(&self, space: FormSpace, dof: &DofFunctional) -> Vec<f64> {
        let positions = self.entity_positions(dof.entity);
        let frame = self.frame(&positions);
        let mut row = vec![0.0; space.dim()];
        let nmon = space.n_monomials();
        if space.dim() == 0 {
            return row;
        }
        let table = space.table();
        match &dof.action {
            Action::Jet { component, derivatives } => {
                let w = self.frame_weights(space, *component, frame.as_ref());
                let dirs: Vec<Vec<f64>> = derivatives.iter().map(|s| self.vector(*s, frame.as_ref())).collect();
                let vertex = positions[0];
                for (m, alpha) in table.list.iter().enumerate() {
                    let mut p: ScalarPoly = vec![(alpha.clone(), 1.0)];
                    for d in &dirs {
                        p = scalar::directional_derivative(&p, &self.grads, d);
                    }
                    let val = scalar::value_at_vertex(&p, vertex);
                    if val != 0.0 {
                        for (i, wi) in w.iter().enumerate() {
                            row[i * nmon + m] = wi * val;
                        }
                    }
                }
            }
            Action::ProxyMoment { component, derivative, test } => {
                let w = self.frame_weights(space, *component, frame.as_ref());
                let dir = derivative.map(|s| self.vector(s, frame.as_ref()));
                let measure = self.simplex.sub(&positions).measure();
                for (m, alpha) in table.list.iter().enumerate() {
                    let mut p: ScalarPoly = vec![(alpha.clone(), 1.0)];
                    if let Some(d) = &dir {
                        p = scalar::directional_derivative(&p, &self.grads, d);
                    }
                    let restricted = scalar::restrict(&p, &positions);
                    let val = scalar::integrate_against(&restricted, test, measure);
                    if val != 0.0 {
                        for (i, wi) in w.iter().enumerate() {
                            row[i * nmon + m] = wi * val;
                        }
                    }
                }
            }
            Action::TraceMoment { test_space, test } => {
                let d = positions.len() - 1;
                let tr = ops::trace_matrix(space, &positions);
                let sub_space = FormSpace::new(d, space.degree, space.k);
                let pairing = ops::wedge_row(sub_space, *test_space, test);
                for (j, r) in row.iter_mut().enumerate() {
                    *r = (0..tr.nrows()).map(|i| pairing[i] * tr[(i, j)]).sum();
                }
            }
        }
        row
    }

    /// Stacked rows for a list of DoFs.
    pub fn dof_rows(&self, space: FormSpace, dofs: &[DofFunctional]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(dofs.len(), space.dim());
        for (i, dof) in dofs.iter().enumerate() {
            let r = self.dof_row(space, dof);
            for (j, v) in r.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}
