//! Simplicial complexes: skeleton, incidence, boundary flags, frames and
//! boundary classification.

mod boundary;
mod frame;
pub mod generators;
mod io;

use std::collections::{BTreeSet, HashMap};

pub use boundary::{classify_boundary, BoundaryClassification, DEFAULT_COLLINEARITY_TOL};
pub use frame::{Frame, FrameRule};
pub use io::MeshFile;

use crate::combinatorics::subsets;
use crate::error::{Error, Result};
use crate::polyspace::Simplex;

/// An immutable simplicial mesh of dimension 1, 2 or 3 with its full skeleton.
/// Every simplex is stored once as an ascending vertex tuple; ids follow the
/// lexicographic order of those tuples.
#[derive(Clone, Debug)]
pub struct SimplicialMesh {
    dim: usize,
    vertices: Vec<Vec<f64>>,
    skeleton: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    faces: Vec<Vec<Vec<usize>>>,
    cofaces: Vec<Vec<Vec<usize>>>,
    boundary: Vec<Vec<bool>>,
    vertex_cells: Vec<Vec<usize>>,
}

/// Builds a mesh from coordinates and top cells, rejecting degenerate or
/// duplicated cells and non-manifold facets.
pub fn build_mesh(vertices: Vec<Vec<f64>>, cells: Vec<Vec<usize>>) -> Result<SimplicialMesh> {
    let Some(first) = cells.first() else {
        return Err(Error::InvalidMesh("mesh has no cells".into()));
    };
    let dim = first.len().saturating_sub(1);
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidMesh(format!("cells with {} vertices are not supported", first.len())));
    }
    if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.len() != dim) {
        return Err(Error::InvalidMesh(format!("vertex {i} has {} coordinates, expected {dim}", v.len())));
    }
    if let Some((i, v)) = vertices.iter().enumerate().find(|(_, v)| v.iter().any(|x| !x.is_finite())) {
        return Err(Error::InvalidMesh(format!("vertex {i} has a non-finite coordinate {v:?}")));
    }
    let mut sorted_cells = Vec::with_capacity(cells.len());
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    for (ci, cell) in cells.iter().enumerate() {
        if cell.len() != dim + 1 {
            return Err(Error::InvalidMesh(format!("cell {ci} has {} vertices, expected {}", cell.len(), dim + 1)));
        }
        if let Some(&bad) = cell.iter().find(|&&v| v >= vertices.len()) {
            return Err(Error::InvalidMesh(format!("cell {ci} references missing vertex {bad}")));
        }
        let mut s = cell.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateCell { cell: ci, measure: 0.0 });
        }
        let simplex = Simplex::new(s.iter().map(|&v| vertices[v].clone()).collect())?;
        let scale = simplex
            .points()
            .iter()
            .flat_map(|a| simplex.points().iter().map(move |b| dist(a, b)))
            .fold(0.0f64, f64::max);
        let measure = simplex.measure();
        if scale == 0.0 || measure <= 1e-12 * scale.powi(dim as i32) {
            return Err(Error::DegenerateCell { cell: ci, measure });
        }
        if let Some(&first) = seen.get(&s) {
            return Err(Error::DuplicateCell { cell: ci, first });
        }
        seen.insert(s.clone(), ci);
        sorted_cells.push(s);
    }

    let mut skeleton = Vec::with_capacity(dim + 1);
    for d in 0..=dim {
        let set: BTreeSet<Vec<usize>> = sorted_cells.iter().flat_map(|c| subsets(c, d + 1)).collect();
        skeleton.push(set.into_iter().collect::<Vec<_>>());
    }
    // Top cells keep their input order so cell ids match the file.
    skeleton[dim] = sorted_cells;
    let index: Vec<HashMap<Vec<usize>, usize>> = skeleton
        .iter()
        .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
        .collect();

    let mut faces = vec![Vec::new(); dim + 1];
    let mut cofaces: Vec<Vec<Vec<usize>>> = skeleton.iter().map(|l| vec![Vec::new(); l.len()]).collect();
    for d in 1..=dim {
        for (id, s) in skeleton[d].iter().enumerate() {
            let fs: Vec<usize> = subsets(s, d).iter().map(|f| index[d - 1][f]).collect();
            for &f in &fs {
                cofaces[d - 1][f].push(id);
            }
            faces[d].push(fs);
        }
    }
    faces[0] = vec![Vec::new(); skeleton[0].len()];

    let mut boundary: Vec<Vec<bool>> = skeleton.iter().map(|l| vec![false; l.len()]).collect();
    for (f, cf) in cofaces[dim - 1].iter().enumerate() {
        match cf.len() {
            1 => {
                for d in 0..dim {
                    for sub in subsets(&skeleton[dim - 1][f], d + 1) {
                        boundary[d][index[d][&sub]] = true;
                    }
                }
            }
            2 => {}
            m => {
                return Err(Error::InvalidMesh(format!(
                    "facet {:?} is shared by {m} cells",
                    skeleton[dim - 1][f]
                )))
            }
        }
    }

    let mut vertex_cells = vec![Vec::new(); vertices.len()];
    for (c, cell) in skeleton[dim].iter().enumerate() {
        for &v in cell {
            vertex_cells[v].push(c);
        }
    }
    Ok(SimplicialMesh { dim, vertices, skeleton, index, faces, cofaces, boundary, vertex_cells })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

impl SimplicialMesh {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    /// Top cells as ascending vertex tuples.
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.skeleton[self.dim]
    }

    pub fn n_cells(&self) -> usize {
        self.skeleton[self.dim].len()
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        &self.skeleton[d]
    }

    pub fn count(&self, d: usize) -> usize {
        self.skeleton.get(d).map_or(0, |l| l.len())
    }

    /// Simplex counts by dimension: [V, E, F, T] truncated to the mesh dimension.
    pub fn counts(&self) -> Vec<usize> {
        self.skeleton.iter().map(|l| l.len()).collect()
    }

    pub fn simplex_id(&self, vertices: &[usize]) -> Option<usize> {
        let d = vertices.len().checked_sub(1)?;
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.index.get(d)?.get(&key).copied()
    }

    /// Ids of the (d-1)-faces of a d-simplex.
    pub fn faces_of(&self, d: usize, id: usize) -> &[usize] {
        &self.faces[d][id]
    }

    /// Ids of the (d+1)-simplices containing a d-simplex.
    pub fn cofaces_of(&self, d: usize, id: usize) -> &[usize] {
        &self.cofaces[d][id]
    }

    /// Top cells containing the given d-simplex.
    pub fn cells_containing(&self, d: usize, id: usize) -> Vec<usize> {
        let s = &self.skeleton[d][id];
        self.vertex_cells[s[0]].iter().copied().filter(|&c| s.iter().all(|v| self.cells()[c].contains(v))).collect()
    }

    pub fn is_boundary(&self, d: usize, id: usize) -> bool {
        self.boundary[d][id]
    }

    pub fn simplex(&self, d: usize, id: usize) -> Simplex {
        Simplex::new(self.skeleton[d][id].iter().map(|&v| self.vertices[v].clone()).collect())
            .expect("stored simplices are well formed")
    }

    pub fn cell_simplex(&self, cell: usize) -> Simplex {
        self.simplex(self.dim, cell)
    }

    /// Orthonormal frame of an edge or (in 3D) a face, under the default rule.
    pub fn simplex_frame(&self, d: usize, id: usize) -> Frame {
        Frame::for_points(self.simplex(d, id).points(), &FrameRule::default())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts().iter().enumerate().map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
    }
}

/// V - E + F (- T).
pub fn euler_characteristic(mesh: &SimplicialMesh) -> i64 {
    mesh.euler_characteristic()
}
