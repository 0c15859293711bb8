use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SimplicialMesh;

/// Default collinearity / coplanarity tolerance (sine of the angle between
/// unit directions or unit normals).
pub const DEFAULT_COLLINEARITY_TOL: f64 = 1e-12;

/// Corner and non-corner boundary simplices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryClassification {
    pub boundary_vertices: BTreeSet<usize>,
    pub corner_vertices: BTreeSet<usize>,
    pub noncorner_boundary_vertices: BTreeSet<usize>,
    pub boundary_edges: BTreeSet<usize>,
    pub corner_edges: BTreeSet<usize>,
    pub noncorner_boundary_edges: BTreeSet<usize>,
    /// False for 1D meshes, where corners are not defined.
    pub has_corner_notion: bool,
    /// False when the mesh has no boundary at all.
    pub has_boundary: bool,
}

impl BoundaryClassification {
    /// V₀: number of boundary vertices.
    pub fn v0(&self) -> usize {
        self.boundary_vertices.len()
    }

    /// V₀ˢ: number of non-corner boundary vertices.
    pub fn v0s(&self) -> usize {
        self.noncorner_boundary_vertices.len()
    }

    /// E₀: number of boundary edges.
    pub fn e0(&self) -> usize {
        self.boundary_edges.len()
    }
}

fn unit(v: Vec<f64>) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

fn sine(a: &[f64], b: &[f64]) -> f64 {
    match a.len() {
        2 => (a[0] * b[1] - a[1] * b[0]).abs(),
        _ => {
            let c = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
        }
    }
}

fn boundary_face_normal(mesh: &SimplicialMesh, f: usize) -> Vec<f64> {
    let s = &mesh.simplices(2)[f];
    let p: Vec<&Vec<f64>> = s.iter().map(|&v| &mesh.vertices()[v]).collect();
    let e1: Vec<f64> = (0..3).map(|a| p[1][a] - p[0][a]).collect();
    let e2: Vec<f64> = (0..3).map(|a| p[2][a] - p[0][a]).collect();
    unit(vec![e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]])
}

fn all_parallel(dirs: &[Vec<f64>], tol: f64) -> bool {
    dirs.iter().all(|d| sine(&dirs[0], d) <= tol)
}

/// Classifies boundary vertices (and, in 3D, boundary edges) as corner or
/// non-corner by the geometry of the adjacent boundary simplices.
pub fn classify_boundary(mesh: &SimplicialMesh, tol: f64) -> BoundaryClassification {
    let n = mesh.dim();
    let mut out = BoundaryClassification { has_corner_notion: n >= 2, ..Default::default() };
    for v in 0..mesh.count(0) {
        if mesh.is_boundary(0, v) {
            out.boundary_vertices.insert(v);
        }
    }
    out.has_boundary = !out.boundary_vertices.is_empty();
    if n == 1 {
        return out;
    }
    for e in 0..mesh.count(1) {
        if mesh.is_boundary(1, e) {
            out.boundary_edges.insert(e);
        }
    }
    match n {
        2 => {
            for &v in &out.boundary_vertices.clone() {
                let dirs: Vec<Vec<f64>> = mesh
                    .cofaces_of(0, v)
                    .iter()
                    .filter(|&&e| mesh.is_boundary(1, e))
                    .map(|&e| {
                        let s = &mesh.simplices(1)[e];
                        let other = if s[0] == v { s[1] } else { s[0] };
                        unit((0..2).map(|a| mesh.vertices()[other][a] - mesh.vertices()[v][a]).collect())
                    })
                    .collect();
                if all_parallel(&dirs, tol) {
                    out.noncorner_boundary_vertices.insert(v);
                } else {
                    out.corner_vertices.insert(v);
                }
            }
        }
        _ => {
            let boundary_faces: Vec<usize> = (0..mesh.count(2)).filter(|&f| mesh.is_boundary(2, f)).collect();
            for &v in &out.boundary_vertices.clone() {
                let normals: Vec<Vec<f64>> = boundary_faces
                    .iter()
                    .filter(|&&f| mesh.simplices(2)[f].contains(&v))
                    .map(|&f| boundary_face_normal(mesh, f))
                    .collect();
                if all_parallel(&normals, tol) {
                    out.noncorner_boundary_vertices.insert(v);
                } else {
                    out.corner_vertices.insert(v);
                }
            }
            for &e in &out.boundary_edges.clone() {
                let normals: Vec<Vec<f64>> = mesh
                    .cofaces_of(1, e)
                    .iter()
                    .filter(|&&f| mesh.is_boundary(2, f))
                    .map(|&f| boundary_face_normal(mesh, f))
                    .collect();
                if all_parallel(&normals, tol) {
                    out.noncorner_boundary_edges.insert(e);
                } else {
                    out.corner_edges.insert(e);
                }
            }
        }
    }
    out
}
