//! Exterior derivative matrices between assembled spaces.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::space::{DiscreteSpace, GlobalSpace};
use crate::linalg;
use crate::polyspace::{ops, FormSpace};
use crate::{Error, Result};

/// Relative tolerance for d(source) ⊆ target.
pub const CONTAINMENT_TOL: f64 = 1e-8;

/// Sparse matrix in coordinate form.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
    /// Relative residual of the containment check.
    pub residual: f64,
}

impl OperatorMatrix {
    pub fn from_dense(m: &DMatrix<f64>, residual: f64) -> Self {
        let mut entries = Vec::new();
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                if m[(i, j)] != 0.0 {
                    entries.push((i, j, m[(i, j)]));
                }
            }
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));
        OperatorMatrix { rows: m.nrows(), cols: m.ncols(), entries, residual }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.entries {
            m[(i, j)] += v;
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// "rows cols nnz" then "row col value" lines, 0-based, 17 significant digits.
    pub fn to_coo_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.entries.len());
        for &(i, j, v) in &self.entries {
            let _ = writeln!(s, "{} {} {:.16e}", i, j, v);
        }
        s
    }

    pub fn from_coo_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let h: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header '{header}'"))))
            .collect::<Result<_>>()?;
        if h.len() != 3 {
            return Err(Error::Parse(format!("bad header '{header}'")));
        }
        let mut entries = Vec::with_capacity(h[2]);
        for line in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::Parse(format!("bad entry '{line}'")));
            }
            let bad = |_| Error::Parse(format!("bad entry '{line}'"));
            entries.push((t[0].parse().map_err(bad)?, t[1].parse().map_err(bad)?, t[2].parse().map_err(|_| Error::Parse(line.to_string()))?));
        }
        if entries.len() != h[2] {
            return Err(Error::Parse(format!("expected {} entries, found {}", h[2], entries.len())));
        }
        Ok(OperatorMatrix { rows: h[0], cols: h[1], entries, residual: 0.0 })
    }
}

/// Local matrix of d from `src` coordinates to `dst` coordinates, raising the
/// degree by homogenization when the target space is stored at a higher degree.
pub fn local_d(src: FormSpace, dst: FormSpace) -> Result<DMatrix<f64>> {
    if dst.k != src.k + 1 || dst.n != src.n {
        return Err(Error::DimensionMismatch(format!(
            "d maps {}-forms to {}-forms, target holds {}-forms",
            src.k,
            src.k + 1,
            dst.k
        )));
    }
    let d = ops::d_matrix(src);
    let lowered = src.degree - 1;
    match dst.degree - lowered {
        0 => Ok(d),
        t if t > 0 => Ok(ops::homogenize_matrix(FormSpace::new(src.n, lowered, dst.k), t as u32) * d),
        _ => Err(Error::DimensionMismatch(format!(
            "target degree {} below the degree {} of d(source)",
            dst.degree, lowered
        ))),
    }
}

/// Column j holds the target DoFs of d applied to global basis function j.
pub fn assemble_d(src: &GlobalSpace, dst: &GlobalSpace) -> Result<OperatorMatrix> {
    if src.n_cells != dst.n_cells {
        return Err(Error::DimensionMismatch("spaces live on different meshes".into()));
    }
    let dl = local_d(src.space(), dst.space())?;
    let mut entries = Vec::new();
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    // value of every global target DoF as seen from its owner, for the consistency check
    let mut owner_values: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dst.dim()];
    let mut blocks = Vec::with_capacity(src.n_cells);
    for c in 0..src.n_cells {
        let image = &dl * &src.local_bases[c];
        let b = &dst.local_rows[c] * &image;
        // d(u)|_c must lie in the target shape space
        let back = &dst.local_bases[c] * &b;
        worst = worst.max(linalg::max_abs(&(&back - &image)));
        scale = scale.max(linalg::max_abs(&image));
        blocks.push(b);
    }
    for (g, &(c, i)) in dst.owners.iter().enumerate() {
        let b = &blocks[c];
        for (j, &gs) in src.cell_maps[c].iter().enumerate() {
            let v = b[(i, j)];
            if v != 0.0 {
                owner_values[g].push((gs, v));
            }
        }
    }
    // every other occurrence of a shared target DoF must agree with its owner
    let mut dense_rows: Vec<std::collections::HashMap<usize, f64>> =
        owner_values.iter().map(|r| r.iter().copied().collect()).collect();
    let mut dof_scale: f64 = 0.0;
    for row in &dense_rows {
        for v in row.values() {
            dof_scale = dof_scale.max(v.abs());
        }
    }
    let mut jump: f64 = 0.0;
    for c in 0..src.n_cells {
        for (i, &g) in dst.cell_maps[c].iter().enumerate() {
            if dst.owners[g] == (c, i) {
                continue;
            }
            for (j, &gs) in src.cell_maps[c].iter().enumerate() {
                let here = blocks[c][(i, j)];
                let there = dense_rows[g].get(&gs).copied().unwrap_or(0.0);
                jump = jump.max((here - there).abs());
            }
            // columns present at the owner but absent here
            for (&gs, &there) in &dense_rows[g] {
                if !src.cell_maps[c].contains(&gs) {
                    jump = jump.max(there.abs());
                }
            }
        }
    }
    for (g, row) in dense_rows.iter_mut().enumerate() {
        let mut cols: Vec<_> = row.drain().collect();
        cols.sort_by_key(|&(j, _)| j);
        for (j, v) in cols {
            entries.push((g, j, v));
        }
    }
    let residual = (worst / scale.max(f64::MIN_POSITIVE)).max(jump / dof_scale.max(f64::MIN_POSITIVE));
    if residual > CONTAINMENT_TOL {
        return Err(Error::Containment { op: format!("d: {} -> {}", src.label(), dst.label()), residual });
    }
    Ok(OperatorMatrix { rows: dst.dim(), cols: src.dim(), entries, residual })
}

/// d between spaces given by broken bases, solved in the least-squares sense
/// and checked for containment.
pub fn discrete_d(src: &DiscreteSpace, dst: &DiscreteSpace) -> Result<(DMatrix<f64>, f64)> {
    if src.n_cells != dst.n_cells {
        return Err(Error::DimensionMismatch("spaces live on different meshes".into()));
    }
    let dl = local_d(src.space, dst.space)?;
    let blocks: Vec<&DMatrix<f64>> = std::iter::repeat(&dl).take(src.n_cells).collect();
    let big = linalg::block_diag(&blocks);
    let image = &big * &src.basis;
    represent(&dst.basis, &image, &format!("d: {} -> {}", src.label, dst.label))
}

/// Coordinates X with basis·X = image, failing if the image leaves the span.
pub fn represent(basis: &DMatrix<f64>, image: &DMatrix<f64>, op: &str) -> Result<(DMatrix<f64>, f64)> {
    if image.ncols() == 0 || basis.ncols() == 0 {
        let resid = linalg::max_abs(image).min(1.0);
        if resid > 0.0 && basis.ncols() == 0 {
            return Err(Error::Containment { op: op.to_string(), residual: resid });
        }
        return Ok((DMatrix::zeros(basis.ncols(), image.ncols()), 0.0));
    }
    let svd = basis.clone().svd(true, true);
    let m = svd.solve(image, 1e-12).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let resid = linalg::max_abs(&(basis * &m - image)) / linalg::max_abs(image).max(f64::MIN_POSITIVE);
    if resid > CONTAINMENT_TOL {
        return Err(Error::Containment { op: op.to_string(), residual: resid });
    }
    Ok((m, resid))
}

/// d applied to broken coordinates of a space (no target needed).
pub fn broken_d(src: &DiscreteSpace) -> Result<DMatrix<f64>> {
    let dst = FormSpace::new(src.n, src.space.degree - 1, src.k + 1);
    let dl = local_d(src.space, dst)?;
    let blocks: Vec<&DMatrix<f64>> = std::iter::repeat(&dl).take(src.n_cells).collect();
    Ok(linalg::block_diag(&blocks) * &src.basis)
}
