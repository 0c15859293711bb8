//! The 2D Hu-Zhang stress element: DoFs on matrix-valued P_p(t) and their
//! restriction to symmetric matrices.
//!
//! Matrix fields are stored entrywise as [M11 | M12 | M21 | M22], each block
//! holding barycentric monomial coefficients of degree p.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::combinatorics::monomials;
use crate::linalg;
use crate::polyspace::{dim_trimmed, scalar, Simplex};
use crate::{Error, Result};

/// Lowest degree of the stress element.
pub const MIN_STRESS_DEGREE: i32 = 3;

/// Which part of M(v) a vertex DoF reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatrixPart {
    /// M11
    First,
    /// M22
    Second,
    /// (M12 + M21) / 2
    Symmetric,
    /// M12 − M21
    Skew,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum StressDof {
    VertexValue { vertex: usize, part: MatrixPart },
    /// ∫_e (M ν_e)_component λ^test, test of degree p−2 on the edge opposite `edge`.
    EdgeNormalMoment { edge: usize, component: usize, test: Vec<u32> },
    /// ∫_t (M12 − M21) λ^test with λ^test vanishing at the vertices.
    InteriorSkewMoment { test: Vec<u32> },
    /// ∫_t M : θ_index over the symmetric normal-trace-free bubbles.
    InteriorSymmetricMoment { index: usize },
}

impl StressDof {
    pub fn is_skew(&self) -> bool {
        matches!(
            self,
            StressDof::VertexValue { part: MatrixPart::Skew, .. } | StressDof::InteriorSkewMoment { .. }
        )
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HuZhangStressElement {
    pub p: i32,
    pub dofs: Vec<StressDof>,
}

/// Integer DoF bookkeeping for one degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StressCounts {
    pub p: i32,
    pub vertex: usize,
    pub edge: usize,
    pub interior_skew: usize,
    pub interior_symmetric: usize,
    /// ½p² + 3p/2 − 2
    pub skew_formula: i64,
    /// 3p²/2 − 3p/2
    pub symmetric_formula: i64,
    /// 2 · dim P⁻_{p−1}Λ¹(t)
    pub trimmed_twice: i64,
    pub shape_dim: usize,
}

impl StressCounts {
    pub fn identity_holds(&self) -> bool {
        self.skew_formula == self.interior_skew as i64
            && self.symmetric_formula == self.interior_symmetric as i64
            && self.skew_formula + self.symmetric_formula == self.trimmed_twice
            && self.vertex + self.edge + self.interior_skew + self.interior_symmetric == self.shape_dim
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StressUnisolvence {
    pub p: i32,
    pub full_dofs: usize,
    pub full_dim: usize,
    pub full_rank: usize,
    pub symmetric_dofs: usize,
    pub symmetric_dim: usize,
    pub symmetric_rank: usize,
    pub min_relative_singular_value: f64,
    pub pass: bool,
}

fn n_mono(p: i32) -> usize {
    monomials(3, p as usize).len()
}

/// Edge opposite vertex j as sorted local positions.
fn edge_positions(j: usize) -> Vec<usize> {
    (0..3).filter(|&i| i != j).collect()
}

/// Unit normal of the edge opposite vertex j (any fixed orientation).
fn edge_normal(simplex: &Simplex, j: usize) -> [f64; 2] {
    let e = edge_positions(j);
    let pts = simplex.points();
    let t = [pts[e[1]][0] - pts[e[0]][0], pts[e[1]][1] - pts[e[0]][1]];
    let len = (t[0] * t[0] + t[1] * t[1]).sqrt();
    [t[1] / len, -t[0] / len]
}

fn edge_length(simplex: &Simplex, j: usize) -> f64 {
    simplex.sub(&edge_positions(j)).measure()
}

/// Symmetric θ ∈ P_p(t, S) with θν = 0 on every edge, as columns over
/// [θ11 | θ12 | θ22].
pub fn symmetric_bubble_basis(simplex: &Simplex, p: i32) -> DMatrix<f64> {
    let table = monomials(3, p as usize);
    let m = table.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for j in 0..3 {
        let nu = edge_normal(simplex, j);
        let edge_table = monomials(2, p as usize);
        for comp in 0..2 {
            // (θν)_comp = θ_{comp,0} ν0 + θ_{comp,1} ν1 with θ stored symmetrically.
            let block = |a: usize, b: usize| match (a.min(b), a.max(b)) {
                (0, 0) => 0,
                (0, 1) => 1,
                _ => 2,
            };
            for edge_alpha in &edge_table.list {
                let mut row = vec![0.0; 3 * m];
                for (i, alpha) in table.list.iter().enumerate() {
                    if alpha[j] != 0 {
                        continue;
                    }
                    let restricted: Vec<u32> = edge_positions(j).iter().map(|&q| alpha[q]).collect();
                    if &restricted != edge_alpha {
                        continue;
                    }
                    for (b, &nb) in nu.iter().enumerate() {
                        row[block(comp, b) * m + i] += nb;
                    }
                }
                rows.push(row);
            }
        }
    }
    let c = DMatrix::from_fn(rows.len(), 3 * m, |i, j| rows[i][j]);
    linalg::nullspace(&c)
}

impl HuZhangStressElement {
    pub fn new(p: i32) -> Result<Self> {
        if p < MIN_STRESS_DEGREE {
            return Err(Error::DegreeTooLow {
                family: "hu-zhang stress".into(),
                k: 1,
                n: 2,
                degree: p,
                min: MIN_STRESS_DEGREE,
            });
        }
        let mut dofs = Vec::new();
        for vertex in 0..3 {
            for part in [MatrixPart::First, MatrixPart::Second, MatrixPart::Symmetric, MatrixPart::Skew] {
                dofs.push(StressDof::VertexValue { vertex, part });
            }
        }
        for edge in 0..3 {
            for component in 0..2 {
                for test in &monomials(2, (p - 2) as usize).list {
                    dofs.push(StressDof::EdgeNormalMoment { edge, component, test: test.clone() });
                }
            }
        }
        for test in &monomials(3, p as usize).list {
            if test.iter().filter(|&&a| a > 0).count() > 1 {
                dofs.push(StressDof::InteriorSkewMoment { test: test.clone() });
            }
        }
        let bubbles = symmetric_bubble_basis(&Simplex::reference(2), p).ncols();
        for index in 0..bubbles {
            dofs.push(StressDof::InteriorSymmetricMoment { index });
        }
        Ok(HuZhangStressElement { p, dofs })
    }

    /// dim of matrix-valued P_p(t).
    pub fn shape_dim(&self) -> usize {
        4 * n_mono(self.p)
    }

    pub fn counts(&self) -> StressCounts {
        let p = self.p as i64;
        let count = |f: &dyn Fn(&StressDof) -> bool| self.dofs.iter().filter(|d| f(d)).count();
        StressCounts {
            p: self.p,
            vertex: count(&|d| matches!(d, StressDof::VertexValue { .. })),
            edge: count(&|d| matches!(d, StressDof::EdgeNormalMoment { .. })),
            interior_skew: count(&|d| matches!(d, StressDof::InteriorSkewMoment { .. })),
            interior_symmetric: count(&|d| matches!(d, StressDof::InteriorSymmetricMoment { .. })),
            skew_formula: (p * p + 3 * p - 4) / 2,
            symmetric_formula: 3 * p * (p - 1) / 2,
            trimmed_twice: 2 * dim_trimmed(2, self.p - 1, 1) as i64,
            shape_dim: self.shape_dim(),
        }
    }

    /// DoF rows against the entrywise monomial basis of matrix P_p(t).
    pub fn dof_matrix(&self, simplex: &Simplex) -> DMatrix<f64> {
        let p = self.p;
        let table = monomials(3, p as usize);
        let m = table.len();
        let area = simplex.measure();
        let bubbles = symmetric_bubble_basis(simplex, p);
        let mut out = DMatrix::zeros(self.dofs.len(), 4 * m);
        for (r, dof) in self.dofs.iter().enumerate() {
            for (i, alpha) in table.list.iter().enumerate() {
                let mono: scalar::ScalarPoly = vec![(alpha.clone(), 1.0)];
                match dof {
                    StressDof::VertexValue { vertex, part } => {
                        let v = scalar::value_at_vertex(&mono, *vertex);
                        let weights: [f64; 4] = match part {
                            MatrixPart::First => [1.0, 0.0, 0.0, 0.0],
                            MatrixPart::Second => [0.0, 0.0, 0.0, 1.0],
                            MatrixPart::Symmetric => [0.0, 0.5, 0.5, 0.0],
                            MatrixPart::Skew => [0.0, 1.0, -1.0, 0.0],
                        };
                        for (e, w) in weights.iter().enumerate() {
                            out[(r, e * m + i)] += w * v;
                        }
                    }
                    StressDof::EdgeNormalMoment { edge, component, test } => {
                        let pos = edge_positions(*edge);
                        let restricted = scalar::restrict(&mono, &pos);
                        if restricted.is_empty() {
                            continue;
                        }
                        let val = scalar::integrate_against(&restricted, test, edge_length(simplex, *edge));
                        let nu = edge_normal(simplex, *edge);
                        for (b, nb) in nu.iter().enumerate() {
                            out[(r, (2 * component + b) * m + i)] += nb * val;
                        }
                    }
                    StressDof::InteriorSkewMoment { test } => {
                        let val = scalar::integrate_against(&mono, test, area);
                        out[(r, m + i)] += val;
                        out[(r, 2 * m + i)] -= val;
                    }
                    StressDof::InteriorSymmetricMoment { index } => {
                        let theta = bubbles.column(*index);
                        for (j, beta) in table.list.iter().enumerate() {
                            let val = scalar::integrate_against(&mono, beta, area);
                            out[(r, i)] += theta[j] * val;
                            out[(r, m + i)] += theta[m + j] * val;
                            out[(r, 2 * m + i)] += theta[m + j] * val;
                            out[(r, 3 * m + i)] += theta[2 * m + j] * val;
                        }
                    }
                }
            }
        }
        out
    }

    /// Entrywise coordinates of a basis of symmetric P_p(t): columns over the
    /// full [M11 | M12 | M21 | M22] layout.
    pub fn symmetric_embedding(&self) -> DMatrix<f64> {
        let m = n_mono(self.p);
        let mut e = DMatrix::zeros(4 * m, 3 * m);
        for i in 0..m {
            e[(i, i)] = 1.0;
            e[(m + i, m + i)] = 1.0;
            e[(2 * m + i, m + i)] = 1.0;
            e[(3 * m + i, 2 * m + i)] = 1.0;
        }
        e
    }

    pub fn unisolvence(&self, simplex: &Simplex) -> StressUnisolvence {
        let full = self.dof_matrix(simplex);
        let keep: Vec<usize> = (0..self.dofs.len()).filter(|&i| !self.dofs[i].is_skew()).collect();
        let sym_rows = DMatrix::from_fn(keep.len(), full.ncols(), |i, j| full[(keep[i], j)]);
        let sym = sym_rows * self.symmetric_embedding();
        let measure = |m: &DMatrix<f64>| {
            let eq = linalg::normalize_columns(&linalg::normalize_rows(m));
            let sv = linalg::singular_values(&eq);
            let ratio = match (sv.first(), sv.last()) {
                (Some(&a), Some(&b)) if a > 0.0 && m.nrows() == m.ncols() => b / a,
                _ => 0.0,
            };
            (linalg::rank_with(&eq, linalg::RANK_TOL), ratio)
        };
        let (full_rank, r1) = measure(&full);
        let (symmetric_rank, r2) = measure(&sym);
        let ratio = r1.min(r2);
        StressUnisolvence {
            p: self.p,
            full_dofs: full.nrows(),
            full_dim: full.ncols(),
            full_rank,
            symmetric_dofs: sym.nrows(),
            symmetric_dim: sym.ncols(),
            symmetric_rank,
            min_relative_singular_value: ratio,
            pass: full.nrows() == full.ncols()
                && full_rank == full.ncols()
                && sym.nrows() == sym.ncols()
                && symmetric_rank == sym.ncols()
                && ratio > crate::elements::UNISOLVENCE_TOL,
        }
    }
}

/// Hu-Zhang stress element of degree p together with its verdict on one triangle.
pub fn huzhang_stress(p: i32, simplex: &Simplex) -> Result<(HuZhangStressElement, StressUnisolvence)> {
    let elem = HuZhangStressElement::new(p)?;
    let report = elem.unisolvence(simplex);
    Ok((elem, report))
}
