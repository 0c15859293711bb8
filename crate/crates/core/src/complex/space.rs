//! Global spaces: DoF tables, global bases and interelement constraints.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::elements::{
    dof_matrix_with, Action, CellContext, Continuity, DofFunctional, DofKind, ElementDef, Family, LocalEntity,
    Selector,
};
use crate::linalg;
use crate::mesh::{FrameRule, SimplicialMesh};
use crate::polyspace::{ops, FormSpace};
use crate::{Error, Result};

/// Identity of a global DoF.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DofKey {
    /// Shared by every cell around the sub-simplex; `slot` is the position
    /// of the DoF in the group attached to that sub-simplex.
    Entity { dim: usize, id: usize, slot: usize },
    /// Duplicated per cell.
    Cell { cell: usize, local: usize },
}

/// Positions of the vertices of a global sub-simplex inside a cell.
pub fn local_positions(cell: &[usize], verts: &[usize]) -> Vec<usize> {
    verts.iter().map(|v| cell.iter().position(|c| c == v).expect("vertex of the cell")).collect()
}

/// Global id of the sub-simplex at `entity` of `cell`.
pub fn entity_global_id(mesh: &SimplicialMesh, cell: usize, entity: LocalEntity) -> usize {
    let verts = &mesh.cells()[cell];
    let positions = &crate::elements::local_entities(mesh.dim(), entity.dim)[entity.index];
    let global: Vec<usize> = positions.iter().map(|&p| verts[p]).collect();
    mesh.simplex_id(&global).expect("sub-simplex of a stored cell")
}

/// Assembled finite element space.
#[derive(Clone, Debug)]
pub struct GlobalSpace {
    pub elem: ElementDef,
    pub rule: FrameRule,
    pub n_cells: usize,
    pub keys: Vec<DofKey>,
    /// Local DoF index → global DoF index for every cell.
    pub cell_maps: Vec<Vec<usize>>,
    /// (cell, local index) of the first occurrence of every global DoF.
    pub owners: Vec<(usize, usize)>,
    /// Orientation sign per cell and local DoF; all +1 since local vertex
    /// order is the sorted global order.
    pub signs: Vec<Vec<i8>>,
    /// Local dual bases, columns in `elem.space` coordinates.
    pub local_bases: Vec<DMatrix<f64>>,
    /// DoF rows acting on `elem.space` coordinates.
    pub local_rows: Vec<DMatrix<f64>>,
    pub counts: Vec<usize>,
}

fn key_for(mesh: &SimplicialMesh, elem: &ElementDef, cell: usize, local: usize, single: bool) -> DofKey {
    let dof = &elem.dofs[local];
    if dof.continuity == Continuity::PerCell && !single {
        return DofKey::Cell { cell, local };
    }
    let slot = elem.dofs_on(dof.entity).iter().position(|&i| i == local).unwrap();
    DofKey::Entity { dim: dof.entity.dim, id: entity_global_id(mesh, cell, dof.entity), slot }
}

impl GlobalSpace {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }

    pub fn label(&self) -> String {
        self.elem.label()
    }

    pub fn space(&self) -> FormSpace {
        self.elem.space
    }

    /// (sub-simplex dim, global id, local DoF index, owning cell if per cell) per global DoF.
    pub fn global_dofs(&self) -> Vec<(usize, usize, usize, Option<usize>)> {
        self.keys
            .iter()
            .zip(&self.owners)
            .map(|(k, &(_, local))| match k {
                DofKey::Entity { dim, id, .. } => (*dim, *id, local, None),
                DofKey::Cell { cell, local } => (self.elem.n, *cell, *local, Some(*cell)),
            })
            .collect()
    }

    /// Dense broken representation: column g holds the coefficients of global
    /// basis function g on every cell.
    pub fn basis_matrix(&self) -> DMatrix<f64> {
        let sd = self.space().dim();
        let mut p = DMatrix::zeros(self.n_cells * sd, self.dim());
        for (c, map) in self.cell_maps.iter().enumerate() {
            let phi = &self.local_bases[c];
            for (j, &g) in map.iter().enumerate() {
                let s = f64::from(self.signs[c][j]);
                for r in 0..sd {
                    p[(c * sd + r, g)] = s * phi[(r, j)];
                }
            }
        }
        p
    }

    pub fn to_discrete(&self) -> DiscreteSpace {
        DiscreteSpace {
            label: self.label(),
            k: self.elem.k,
            n: self.elem.n,
            space: self.space(),
            n_cells: self.n_cells,
            basis: self.basis_matrix(),
            constraints: Some(self.constraint_matrix()),
        }
    }

    /// Rows vanishing exactly on broken fields that belong to the space:
    /// agreement of every shared DoF between cells, and membership of every
    /// cell restriction in the shape space.
    pub fn constraint_matrix(&self) -> DMatrix<f64> {
        let sd = self.space().dim();
        let broken = self.n_cells * sd;
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
        let mut occurrences: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (c, map) in self.cell_maps.iter().enumerate() {
            for (j, &g) in map.iter().enumerate() {
                occurrences.entry(g).or_default().push((c, j));
            }
        }
        let mut gs: Vec<_> = occurrences.keys().copied().collect();
        gs.sort_unstable();
        for g in gs {
            let occ = &occurrences[&g];
            let (c0, j0) = occ[0];
            for &(c, j) in &occ[1..] {
                let mut row = Vec::new();
                for r in 0..sd {
                    row.push((c0 * sd + r, self.local_rows[c0][(j0, r)]));
                    row.push((c * sd + r, -self.local_rows[c][(j, r)]));
                }
                rows.push(row);
            }
        }
        // shape-space membership for proper subspaces (trimmed shapes)
        if self.elem.shape_dim() < sd {
            let comp = linalg::nullspace(&self.elem.shape.transpose());
            for c in 0..self.n_cells {
                for col in 0..comp.ncols() {
                    rows.push((0..sd).map(|r| (c * sd + r, comp[(r, col)])).collect());
                }
            }
        }
        let mut m = DMatrix::zeros(rows.len(), broken);
        for (i, row) in rows.iter().enumerate() {
            for &(c, v) in row {
                m[(i, c)] += v;
            }
        }
        m
    }
}

pub fn assemble_space(mesh: &SimplicialMesh, family: Family, p: i32, k: usize) -> Result<GlobalSpace> {
    let elem = ElementDef::new(family, p, k, mesh.dim())?;
    assemble_element(mesh, &elem, &FrameRule::default(), false)
}

/// Assemble with an explicit element, frame rule, and optionally with every
/// per-cell DoF treated as single valued.
pub fn assemble_element(
    mesh: &SimplicialMesh,
    elem: &ElementDef,
    rule: &FrameRule,
    all_single: bool,
) -> Result<GlobalSpace> {
    if elem.n != mesh.dim() {
        return Err(Error::DimensionMismatch(format!(
            "element for n={} on a mesh of dimension {}",
            elem.n,
            mesh.dim()
        )));
    }
    let mut index: HashMap<DofKey, usize> = HashMap::new();
    let mut keys = Vec::new();
    let mut owners = Vec::new();
    let mut cell_maps = Vec::new();
    let mut local_bases = Vec::new();
    let mut local_rows = Vec::new();
    for c in 0..mesh.n_cells() {
        let mut map = Vec::with_capacity(elem.dofs.len());
        for j in 0..elem.dofs.len() {
            let key = key_for(mesh, elem, c, j, all_single);
            let g = *index.entry(key.clone()).or_insert_with(|| {
                keys.push(key);
                owners.push((c, j));
                keys.len() - 1
            });
            map.push(g);
        }
        cell_maps.push(map);
        let simplex = mesh.cell_simplex(c);
        let ctx = CellContext::new(&simplex, rule);
        let rows = ctx.dof_rows(elem.space, &elem.dofs);
        let m = dof_matrix_with(elem, &simplex, rule);
        let inv = m.clone().lu().try_inverse().ok_or_else(|| {
            let sv = linalg::singular_values(&linalg::normalize_rows(&m));
            Error::Singular(sv.last().copied().unwrap_or(0.0) / sv.first().copied().unwrap_or(1.0))
        })?;
        local_bases.push(&elem.shape * inv);
        local_rows.push(rows);
    }
    let signs = cell_maps.iter().map(|m| vec![1i8; m.len()]).collect();
    Ok(GlobalSpace {
        elem: elem.clone(),
        rule: rule.clone(),
        n_cells: mesh.n_cells(),
        keys,
        cell_maps,
        owners,
        signs,
        local_bases,
        local_rows,
        counts: mesh.counts(),
    })
}

/// Count the global DoFs of an element on a mesh without computing bases.
pub fn count_dofs(mesh: &SimplicialMesh, elem: &ElementDef) -> usize {
    let mut seen = std::collections::HashSet::new();
    for c in 0..mesh.n_cells() {
        for j in 0..elem.dofs.len() {
            seen.insert(key_for(mesh, elem, c, j, false));
        }
    }
    seen.len()
}

/// A space given by a basis of broken fields.
#[derive(Clone, Debug)]
pub struct DiscreteSpace {
    pub label: String,
    pub n: usize,
    pub k: usize,
    /// Coordinate space on each cell.
    pub space: FormSpace,
    pub n_cells: usize,
    /// (n_cells · space.dim()) × dim.
    pub basis: DMatrix<f64>,
    /// Rows that vanish on members of the space.
    pub constraints: Option<DMatrix<f64>>,
}

impl DiscreteSpace {
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Same space with coordinates raised to degree `degree` by multiplying with Σλ.
    pub fn homogenized(&self, degree: i32) -> DiscreteSpace {
        let times = (degree - self.space.degree) as u32;
        if times == 0 {
            return self.clone();
        }
        let h = ops::homogenize_matrix(self.space, times);
        let blocks: Vec<&DMatrix<f64>> = std::iter::repeat(&h).take(self.n_cells).collect();
        let big = linalg::block_diag(&blocks);
        DiscreteSpace {
            label: self.label.clone(),
            n: self.n,
            k: self.k,
            space: self.space.with_degree(degree),
            n_cells: self.n_cells,
            basis: &big * &self.basis,
            constraints: None,
        }
    }
}

/// Interelement and local conditions defining a space by constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// Equal traces on every interior facet.
    Trace,
    /// Equal proxy components and derivatives up to the order at vertices.
    VertexJet(usize),
    /// Equal gradient of a 0-form along every edge.
    EdgeGradient,
    /// Equal proxy components along every edge.
    EdgeComponents,
    /// Equal proxy components on every interior facet.
    FacetComponents,
    /// Equal edge-normal proxy components along every edge (3D, 2-forms).
    EdgeNormalProxy,
}

fn proxy_components(n: usize, k: usize) -> Vec<Selector> {
    if k == 0 || k == n {
        vec![Selector::Scalar]
    } else {
        (0..n).map(Selector::Axis).collect()
    }
}

/// Functionals attached to a sub-simplex that determine a field there, and
/// the same functionals as seen from each cell containing it.
fn agreement_rows(
    mesh: &SimplicialMesh,
    space: FormSpace,
    d: usize,
    make: &dyn Fn(usize) -> Vec<DofFunctional>,
    rule: &FrameRule,
    rows: &mut Vec<Vec<(usize, f64)>>,
) {
    let sd = space.dim();
    for id in 0..mesh.count(d) {
        let cells = mesh.cells_containing(d, id);
        if cells.len() < 2 {
            continue;
        }
        let verts = &mesh.simplices(d)[id];
        let eval = |c: usize| {
            let positions = local_positions(&mesh.cells()[c], verts);
            let index = crate::elements::local_entities(mesh.dim(), d)
                .iter()
                .position(|e| *e == positions)
                .unwrap();
            let dofs = make(index);
            let s = mesh.cell_simplex(c);
            CellContext::new(&s, rule).dof_rows(space, &dofs)
        };
        let r0 = eval(cells[0]);
        for &c in &cells[1..] {
            let rc = eval(c);
            for i in 0..r0.nrows() {
                let mut row = Vec::with_capacity(2 * sd);
                for r in 0..sd {
                    row.push((cells[0] * sd + r, r0[(i, r)]));
                    row.push((c * sd + r, -rc[(i, r)]));
                }
                rows.push(row);
            }
        }
    }
}

/// Space of broken P_qΛ^k fields (full local spaces) satisfying the conditions.
pub fn characterized_space(
    mesh: &SimplicialMesh,
    k: usize,
    degree: i32,
    conditions: &[Condition],
    label: &str,
) -> Result<DiscreteSpace> {
    let n = mesh.dim();
    let space = FormSpace::new(n, degree, k);
    let sd = space.dim();
    let rule = FrameRule::default();
    let comps = proxy_components(n, k);
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    for cond in conditions {
        match *cond {
            Condition::Trace => {
                if k < n {
                    let mut acc = Vec::new();
                    for id in 0..mesh.count(n - 1) {
                        let cells = mesh.cells_containing(n - 1, id);
                        if cells.len() < 2 {
                            continue;
                        }
                        let verts = &mesh.simplices(n - 1)[id];
                        let t0 = ops::trace_matrix(space, &local_positions(&mesh.cells()[cells[0]], verts));
                        let t1 = ops::trace_matrix(space, &local_positions(&mesh.cells()[cells[1]], verts));
                        for i in 0..t0.nrows() {
                            let mut row = Vec::new();
                            for r in 0..sd {
                                row.push((cells[0] * sd + r, t0[(i, r)]));
                                row.push((cells[1] * sd + r, -t1[(i, r)]));
                            }
                            acc.push(row);
                        }
                    }
                    rows.extend(acc);
                }
            }
            Condition::VertexJet(order) => {
                let make = |index: usize| {
                    let mut out = Vec::new();
                    for &c in &comps {
                        let mut lists: Vec<Vec<usize>> = vec![vec![]];
                        let mut all = lists.clone();
                        for _ in 0..order {
                            lists = lists
                                .iter()
                                .flat_map(|l| {
                                    let s = l.last().copied().unwrap_or(0);
                                    (s..n).map(move |a| {
                                        let mut m = l.clone();
                                        m.push(a);
                                        m
                                    })
                                })
                                .collect();
                            all.extend(lists.clone());
                        }
                        for l in all {
                            out.push(point_dof(index, c, l));
                        }
                    }
                    out
                };
                agreement_rows(mesh, space, 0, &make, &rule, &mut rows);
            }
            Condition::EdgeGradient => {
                if k != 0 || n < 2 {
                    return Err(Error::InvalidArgument("edge gradient condition needs a 0-form, n >= 2".into()));
                }
                let make = |index: usize| {
                    let mut out = Vec::new();
                    for i in 0..n - 1 {
                        for b in &crate::combinatorics::monomials(2, (degree - 1).max(0) as usize).list {
                            out.push(moment_dof(1, index, Selector::Scalar, Some(Selector::EdgeNormal(i)), b.clone()));
                        }
                    }
                    out
                };
                agreement_rows(mesh, space, 1, &make, &rule, &mut rows);
            }
            Condition::EdgeComponents | Condition::FacetComponents => {
                let d = if *cond == Condition::EdgeComponents { 1 } else { n - 1 };
                if d == 0 {
                    continue;
                }
                let make = |index: usize| {
                    let mut out = Vec::new();
                    for &c in &comps {
                        for b in &crate::combinatorics::monomials(d + 1, degree as usize).list {
                            out.push(moment_dof(d, index, c, None, b.clone()));
                        }
                    }
                    out
                };
                agreement_rows(mesh, space, d, &make, &rule, &mut rows);
            }
            Condition::EdgeNormalProxy => {
                if n != 3 || k != 2 {
                    return Err(Error::InvalidArgument("edge normal condition is for 2-forms in 3D".into()));
                }
                let make = |index: usize| {
                    let mut out = Vec::new();
                    for nu in [Selector::EdgeNormal(0), Selector::EdgeNormal(1)] {
                        for b in &crate::combinatorics::monomials(2, degree as usize).list {
                            out.push(moment_dof(1, index, nu, None, b.clone()));
                        }
                    }
                    out
                };
                agreement_rows(mesh, space, 1, &make, &rule, &mut rows);
            }
        }
    }
    let broken = mesh.n_cells() * sd;
    let mut c = DMatrix::zeros(rows.len(), broken);
    for (i, row) in rows.iter().enumerate() {
        for &(col, v) in row {
            c[(i, col)] += v;
        }
    }
    let basis = if rows.is_empty() { DMatrix::identity(broken, broken) } else { linalg::nullspace(&c) };
    Ok(DiscreteSpace {
        label: label.to_string(),
        n,
        k,
        space,
        n_cells: mesh.n_cells(),
        basis,
        constraints: Some(c),
    })
}

fn point_dof(index: usize, component: Selector, derivs: Vec<usize>) -> DofFunctional {
    let order = derivs.len();
    DofFunctional {
        kind: if order == 0 { DofKind::PointValue } else { DofKind::PointDerivative { order } },
        entity: LocalEntity { dim: 0, index },
        action: Action::Jet { component, derivatives: derivs.into_iter().map(Selector::Axis).collect() },
        continuity: Continuity::SingleValued,
        class: crate::elements::DofClass::Vertex,
        test_degree: 0,
    }
}

fn moment_dof(dim: usize, index: usize, component: Selector, derivative: Option<Selector>, test: Vec<u32>) -> DofFunctional {
    DofFunctional {
        kind: if dim == 1 { DofKind::EdgeMoment } else { DofKind::FaceMoment },
        entity: LocalEntity { dim, index },
        action: Action::ProxyMoment { component, derivative, test },
        continuity: Continuity::SingleValued,
        class: crate::elements::DofClass::Edge,
        test_degree: 0,
    }
}

/// Conditions that characterize each DoF-defined family independently of its DoFs.
pub fn family_conditions(family: Family, k: usize, n: usize) -> Vec<Condition> {
    use Condition::*;
    match (family, n, k) {
        (Family::R0, _, _) | (Family::Trimmed, _, _) => vec![Trace],
        (Family::R1, _, 0) => vec![Trace, VertexJet(1)],
        (Family::R1, 3, 2) | (Family::R1, 3, 3) | (Family::R1, 2, 2) => vec![Trace],
        (Family::R1, _, _) => vec![Trace, VertexJet(0)],
        (Family::R2, 1, 0) => vec![VertexJet(2)],
        (Family::R2, _, 0) => vec![Trace, VertexJet(2), EdgeGradient],
        (Family::R2, 3, 3) => vec![Trace],
        (Family::R2, 3, 1) => vec![Trace, VertexJet(1), EdgeComponents],
        (Family::R2, _, 1) | (Family::VectorHermite, _, _) => vec![FacetComponents, VertexJet(1)],
        (Family::R2, _, _) => vec![Trace, VertexJet(0)],
        (Family::HuZhang, _, _) => vec![Trace, VertexJet(0), EdgeNormalProxy],
        (Family::VectorLagrange, _, _) => vec![FacetComponents],
    }
}
