//! Small meshes used by tests, the CLI and the acceptance suite.

use std::collections::HashMap;

use super::{build_mesh, SimplicialMesh};
use crate::polyspace::Simplex;

fn build(vertices: Vec<Vec<f64>>, cells: Vec<Vec<usize>>) -> SimplicialMesh {
    build_mesh(vertices, cells).expect("generator meshes are valid")
}

/// The reference n-simplex as a one-cell mesh.
pub fn single_simplex(n: usize) -> SimplicialMesh {
    let s = Simplex::reference(n);
    build(s.points().to_vec(), vec![(0..=n).collect()])
}

/// `m` unit intervals in a row.
pub fn interval_chain(m: usize) -> SimplicialMesh {
    build((0..=m).map(|i| vec![i as f64]).collect(), (0..m).map(|i| vec![i, i + 1]).collect())
}

/// Unit square split along the diagonal from (1,0) to (0,1).
pub fn two_triangle_square() -> SimplicialMesh {
    build(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
        vec![vec![0, 1, 3], vec![1, 2, 3]],
    )
}

/// Unit square whose bottom edge is split at its midpoint (vertex 4), so
/// vertex 4 is a non-corner boundary vertex.
pub fn square_with_midpoint() -> SimplicialMesh {
    build(
        vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![0.5, 0.0]],
        vec![vec![0, 4, 3], vec![4, 1, 2], vec![4, 2, 3]],
    )
}

/// Square with a square hole: 8 vertices, 8 triangles, Euler characteristic 0.
pub fn annulus() -> SimplicialMesh {
    build(
        vec![
            vec![0.0, 0.0],
            vec![3.0, 0.0],
            vec![3.0, 3.0],
            vec![0.0, 3.0],
            vec![1.0, 1.0],
            vec![2.0, 1.0],
            vec![2.0, 2.0],
            vec![1.0, 2.0],
        ],
        vec![
            vec![0, 1, 5],
            vec![0, 5, 4],
            vec![1, 2, 6],
            vec![1, 6, 5],
            vec![2, 3, 7],
            vec![2, 7, 6],
            vec![3, 0, 4],
            vec![3, 4, 7],
        ],
    )
}

/// Two cells sharing a facet.
pub fn two_cells(n: usize) -> SimplicialMesh {
    match n {
        1 => interval_chain(2),
        2 => two_triangle_square(),
        3 => build(
            vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.0, 0.0],
                vec![0.0, 1.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![0.8, 0.9, 0.7],
            ],
            vec![vec![0, 1, 2, 3], vec![1, 2, 3, 4]],
        ),
        _ => panic!("no two-cell mesh in dimension {n}"),
    }
}

/// Three cells forming a contractible complex with an interior vertex or
/// edge shared by all of them.
pub fn three_cells(n: usize) -> SimplicialMesh {
    match n {
        1 => interval_chain(3),
        2 => square_with_midpoint(),
        3 => build(
            vec![
                vec![0.0, 0.0, 0.0],
                vec![0.0, 0.0, 1.0],
                vec![1.0, 0.0, 0.2],
                vec![0.1, 1.0, 0.4],
                vec![-1.0, 0.3, 0.6],
                vec![-0.2, -1.0, 0.5],
            ],
            vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4], vec![0, 1, 4, 5]],
        ),
        _ => panic!("no three-cell mesh in dimension {n}"),
    }
}

/// Box grid of nx×ny×nz unit cubes tetrahedralized around cube centers.
///
/// Each interior square face between two cubes gives four tetrahedra spanned
/// by the two cube centers and one edge of the face, so every cube center is
/// joined to its 8 corners and 6 neighbouring centers (14 edges). A boundary
/// face has no neighbouring center; it gets a face-center vertex instead and
/// four tetrahedra (cube center, face center, face edge).
pub fn fourteen_tet_grid(nx: usize, ny: usize, nz: usize) -> SimplicialMesh {
    assert!(nx >= 1 && ny >= 1 && nz >= 1, "grid needs at least one cube per axis");
    let dims = [nx, ny, nz];
    let mut vertices: Vec<Vec<f64>> = Vec::new();
    let mut ids: HashMap<[i64; 3], usize> = HashMap::new();
    // Doubled integer coordinates keep centers exact.
    let mut vid = |p: [i64; 3], vertices: &mut Vec<Vec<f64>>| -> usize {
        *ids.entry(p).or_insert_with(|| {
            vertices.push(p.iter().map(|&c| c as f64 / 2.0).collect());
            vertices.len() - 1
        })
    };
    for i in 0..=nx as i64 {
        for j in 0..=ny as i64 {
            for k in 0..=nz as i64 {
                vid([2 * i, 2 * j, 2 * k], &mut vertices);
            }
        }
    }
    let mut cells = Vec::new();
    for i in 0..nx as i64 {
        for j in 0..ny as i64 {
            for k in 0..nz as i64 {
                let cube = [i, j, k];
                let center = vid([2 * i + 1, 2 * j + 1, 2 * k + 1], &mut vertices);
                for axis in 0..3 {
                    for side in [0i64, 1] {
                        let mut neighbour = cube;
                        neighbour[axis] += if side == 0 { -1 } else { 1 };
                        let inside = neighbour[axis] >= 0 && neighbour[axis] < dims[axis] as i64;
                        // Interior faces are emitted once, from the lower cube.
                        if inside && side == 0 {
                            continue;
                        }
                        let mut fc = [2 * i + 1, 2 * j + 1, 2 * k + 1];
                        fc[axis] += if side == 0 { -1 } else { 1 };
                        let apex = if inside {
                            vid([2 * neighbour[0] + 1, 2 * neighbour[1] + 1, 2 * neighbour[2] + 1], &mut vertices)
                        } else {
                            vid(fc, &mut vertices)
                        };
                        let (a, b) = ((axis + 1) % 3, (axis + 2) % 3);
                        let ring = [(-1i64, -1i64), (1, -1), (1, 1), (-1, 1)];
                        for m in 0..4 {
                            let corner = |(da, db): (i64, i64)| {
                                let mut c = fc;
                                c[a] += da;
                                c[b] += db;
                                c
                            };
                            let c0 = vid(corner(ring[m]), &mut vertices);
                            let c1 = vid(corner(ring[(m + 1) % 4]), &mut vertices);
                            cells.push(vec![center, apex, c0, c1]);
                        }
                    }
                }
            }
        }
    }
    build(vertices, cells)
}
