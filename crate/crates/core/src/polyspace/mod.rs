//! Polynomial differential forms on one simplex: dense coordinate spaces,
//! sparse forms, exact integration, d, Koszul, traces and trimmed bases.

mod form;
mod geometry;
pub mod ops;
pub mod scalar;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use form::{FormPolynomial, FormSpace, MultiIndex};
pub use geometry::Simplex;

use crate::combinatorics::{binomial, factorial, multi_factorial};
use crate::error::{Error, Result};
use crate::linalg;

/// dim P_pΛ^k on an n-simplex.
pub fn dim_full(n: usize, p: i32, k: usize) -> usize {
    if p < 0 || k > n {
        return 0;
    }
    (binomial(p as i64 + n as i64, n as i64) * binomial(n as i64, k as i64)) as usize
}

/// dim P⁻_pΛ^k on an n-simplex; P⁻_0Λ^0 is the constants.
pub fn dim_trimmed(n: usize, p: i32, k: usize) -> usize {
    if p < 0 || k > n {
        return 0;
    }
    if p == 0 {
        return usize::from(k == 0);
    }
    let (p, n, k) = (p as i64, n as i64, k as i64);
    (binomial(k + p - 1, k) * binomial(n + p, n - k)) as usize
}

/// ∫_simplex λ^α with respect to the simplex measure.
pub fn integrate_monomial(simplex: &Simplex, alpha: &MultiIndex) -> f64 {
    assert_eq!(alpha.len(), simplex.dim() + 1, "exponent length must be dim + 1");
    let d = simplex.dim();
    multi_factorial(&alpha.0) * factorial(d) / factorial(alpha.degree() as usize + d) * simplex.measure()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisKind {
    Full,
    Trimmed,
    Bubble,
}

/// A linearly independent family of forms stored as columns of coordinates
/// in one `FormSpace`.
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    pub space: FormSpace,
    pub kind: BasisKind,
    pub matrix: DMatrix<f64>,
}

impl SpaceBasis {
    pub fn new(space: FormSpace, kind: BasisKind, matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != space.dim() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} rows, space has dimension {}",
                matrix.nrows(),
                space.dim()
            )));
        }
        let r = linalg::rank(&matrix);
        if r != matrix.ncols() {
            return Err(Error::InvalidArgument(format!(
                "basis of {} members has rank {r}",
                matrix.ncols()
            )));
        }
        Ok(SpaceBasis { space, kind, matrix })
    }

    pub fn len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.ncols() == 0
    }

    pub fn members(&self) -> Vec<FormPolynomial> {
        (0..self.len())
            .map(|j| FormPolynomial::from_dense(self.space, self.matrix.column(j).as_slice()))
            .collect()
    }
}

pub fn full_basis(n: usize, p: i32, k: usize) -> SpaceBasis {
    let space = FormSpace::new(n, p, k);
    SpaceBasis { space, kind: BasisKind::Full, matrix: DMatrix::identity(space.dim(), space.dim()) }
}

/// Coordinates (in P_pΛ^k) of a basis of P⁻_pΛ^k = P_{p-1}Λ^k + κ P_{p-1}Λ^{k+1}.
pub fn trimmed_matrix(n: usize, p: i32, k: usize) -> DMatrix<f64> {
    let target = FormSpace::new(n, p, k);
    if p < 0 {
        return DMatrix::zeros(target.dim(), 0);
    }
    if p == 0 {
        return if k == 0 { DMatrix::identity(target.dim(), target.dim()) } else { DMatrix::zeros(target.dim(), 0) };
    }
    let lower = FormSpace::new(n, p - 1, k);
    let mut blocks = vec![ops::homogenize_matrix(lower, 1)];
    if k < n {
        blocks.push(ops::koszul_matrix(FormSpace::new(n, p - 1, k + 1)));
    }
    let refs: Vec<&DMatrix<f64>> = blocks.iter().collect();
    let spanning = linalg::hstack(&refs);
    let keep = linalg::independent_columns(&spanning);
    linalg::select_columns(&spanning, &keep)
}

/// Basis of P⁻_pΛ^k on the given simplex (the coordinates are frame-relative,
/// so they do not depend on the geometry).
pub fn trimmed_basis(simplex: &Simplex, p: i32, k: usize) -> Result<SpaceBasis> {
    let n = simplex.dim();
    if k > n {
        return Err(Error::InvalidArgument(format!("form degree {k} exceeds simplex dimension {n}")));
    }
    let m = trimmed_matrix(n, p, k);
    if m.ncols() != dim_trimmed(n, p, k) {
        return Err(Error::InvalidArgument(format!(
            "trimmed spanning set has rank {}, expected {}",
            m.ncols(),
            dim_trimmed(n, p, k)
        )));
    }
    SpaceBasis::new(FormSpace::new(n, p, k), BasisKind::Trimmed, m)
}

#[cfg(test)]
mod tests;
