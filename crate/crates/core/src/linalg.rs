//! Dense rank, nullspace and span utilities used by every verification.

use nalgebra::DMatrix;

/// Singular values at or below `RANK_TOL` times the largest are treated as zero.
pub const RANK_TOL: f64 = 1e-9;

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Lines whose norm is below this fraction of the largest line norm are
/// roundoff and get zeroed instead of scaled up.
pub const ZERO_LINE_TOL: f64 = 1e-12;

/// Scale each nonzero column to unit Euclidean norm.
pub fn normalize_columns(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    let top = out.column_iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    for mut col in out.column_iter_mut() {
        let norm = col.norm();
        if norm > ZERO_LINE_TOL * top {
            col /= norm;
        } else {
            col.fill(0.0);
        }
    }
    out
}

/// Scale each nonzero row to unit Euclidean norm.
pub fn normalize_rows(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    let top = out.row_iter().map(|r| r.norm()).fold(0.0f64, f64::max);
    for mut row in out.row_iter_mut() {
        let norm = row.norm();
        if norm > ZERO_LINE_TOL * top {
            row /= norm;
        } else {
            row.fill(0.0);
        }
    }
    out
}

pub fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with a relative singular-value cutoff.
pub fn rank_with(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&top) if top == 0.0 => 0,
        Some(&top) => s.iter().filter(|&&v| v > rel_tol * top).count(),
    }
}

/// Rank after column equilibration, which leaves the rank unchanged but keeps
/// columns of very different scale from masking each other.
pub fn rank(m: &DMatrix<f64>) -> usize {
    rank_with(&normalize_columns(m), RANK_TOL)
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn nullspace(m: &DMatrix<f64>) -> DMatrix<f64> {
    nullspace_with(m, RANK_TOL)
}

pub fn nullspace_with(m: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = m.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    let scaled = normalize_rows(m);
    let top = singular_values(&scaled).first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return DMatrix::identity(n, n);
    }
    // Pad to at least n rows so the SVD returns a full right basis.
    let padded = if scaled.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (scaled.nrows(), n)).copy_from(&scaled);
        p
    } else {
        scaled
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= rel_tol * top)
        .collect();
    let mut out = DMatrix::zeros(n, keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &v_t.row(i).transpose());
    }
    out
}

/// Orthonormal basis of the column space.
pub fn column_space(m: &DMatrix<f64>) -> DMatrix<f64> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let scaled = normalize_columns(m);
    let svd = scaled.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let top = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b));
    if top == 0.0 {
        return DMatrix::zeros(m.nrows(), 0);
    }
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > RANK_TOL * top)
        .collect();
    let mut out = DMatrix::zeros(m.nrows(), keep.len());
    for (j, &i) in keep.iter().enumerate() {
        out.set_column(j, &u.column(i));
    }
    out
}

/// Greedy selection of linearly independent columns, keeping the originals.
pub fn independent_columns(m: &DMatrix<f64>) -> Vec<usize> {
    let mut q: Vec<nalgebra::DVector<f64>> = Vec::new();
    let mut kept = Vec::new();
    for j in 0..m.ncols() {
        let v = m.column(j).into_owned();
        let norm = v.norm();
        if norm == 0.0 {
            continue;
        }
        let mut r = v.clone();
        // Two passes of Gram-Schmidt for stability.
        for _ in 0..2 {
            for e in &q {
                let c = e.dot(&r);
                r.axpy(-c, e, 1.0);
            }
        }
        let rn = r.norm();
        if rn > 1e-9 * norm {
            q.push(r / rn);
            kept.push(j);
        }
    }
    kept
}

pub fn select_columns(m: &DMatrix<f64>, cols: &[usize]) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m.nrows(), cols.len());
    for (j, &c) in cols.iter().enumerate() {
        out.set_column(j, &m.column(c));
    }
    out
}

pub fn hstack(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let rows = blocks.iter().map(|b| b.nrows()).max().unwrap_or(0);
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for b in blocks {
        assert!(b.ncols() == 0 || b.nrows() == rows, "hstack row mismatch");
        if b.ncols() > 0 {
            out.view_mut((0, c), (b.nrows(), b.ncols())).copy_from(b);
        }
        c += b.ncols();
    }
    out
}

pub fn vstack(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let cols = blocks.iter().map(|b| b.ncols()).max().unwrap_or(0);
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut r = 0;
    for b in blocks {
        assert!(b.nrows() == 0 || b.ncols() == cols, "vstack column mismatch");
        if b.nrows() > 0 {
            out.view_mut((r, 0), (b.nrows(), b.ncols())).copy_from(b);
        }
        r += b.nrows();
    }
    out
}

pub fn block_diag(blocks: &[&DMatrix<f64>]) -> DMatrix<f64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        if b.nrows() > 0 && b.ncols() > 0 {
            out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        }
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Exact rank of an integer matrix by fraction-free elimination.
pub fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| a[i][col] != 0) else { continue };
        a.swap(rank, p);
        for i in rank + 1..nrows {
            if a[i][col] != 0 {
                let (f, g) = (a[rank][col], a[i][col]);
                for j in col..ncols {
                    a[i][j] = a[i][j] * f - a[rank][j] * g;
                }
                let gcd = a[i].iter().fold(0i128, |acc, &v| gcd(acc, v.abs()));
                if gcd > 1 {
                    for v in a[i].iter_mut() {
                        *v /= gcd;
                    }
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace_of_rank_one() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        assert_eq!(rank(&m), 1);
        let n = nullspace(&m);
        assert_eq!(n.ncols(), 2);
        assert!(max_abs(&(&m * &n)) < 1e-12);
    }

    #[test]
    fn integer_rank_matches_float_rank() {
        let rows = vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]];
        assert_eq!(integer_rank(&rows), 2);
        assert_eq!(integer_rank(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn independent_columns_skips_dependent() {
        let m = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(independent_columns(&m), vec![0, 2]);
    }
}
