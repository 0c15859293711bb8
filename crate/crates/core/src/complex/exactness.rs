//! Rank-based verification of the complex property and of exactness.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::operator::{assemble_d, discrete_d, OperatorMatrix};
use super::space::{assemble_element, DiscreteSpace, GlobalSpace};
use crate::combinatorics::subsets;
use crate::elements::{ElementDef, Family};
use crate::linalg;
use crate::mesh::{FrameRule, SimplicialMesh};
use crate::Result;

/// Bound on ‖D_{k+1} D_k‖_max after normalization.
pub const DD_TOL: f64 = 1e-10;

/// One slot of a finite element sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Slot {
    pub family: Family,
    pub degree: i32,
    pub k: usize,
}

/// The spaces of a sequence, Λ⁰ first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub name: String,
    pub n: usize,
    pub slots: Vec<Slot>,
}

impl FamilyRow {
    /// Row of family r with Λ⁰ degree q: q, q−1, …
    pub fn standard(r: usize, n: usize, q: i32) -> FamilyRow {
        let family = match r {
            0 => Family::R0,
            1 => Family::R1,
            _ => Family::R2,
        };
        FamilyRow {
            name: format!("r={r} n={n} degrees {}..{}", q, q - n as i32),
            n,
            slots: (0..=n).map(|k| Slot { family, degree: q - k as i32, k }).collect(),
        }
    }

    /// Row as indexed in the family tables: 1D r0 p,p−1; r1 p+1,p; r2 p+3,p+2;
    /// 2D r0 p..p−2; r1 p+1..p−1; r2 p+3..p+1; 3D r0, r1 p..p−3; r2 p+2..p−1.
    pub fn table(r: usize, n: usize, p: i32) -> FamilyRow {
        let shift = match (n, r) {
            (_, 0) => 0,
            (1, 1) | (2, 1) => 1,
            (3, 1) => 0,
            (1, _) | (2, _) => 3,
            _ => 2,
        };
        FamilyRow::standard(r, n, p + shift)
    }

    /// P_{1,p}Λ⁰ → P_{1,p−1}Λ¹ → P⁻_{p−1}Λ² → P_{p−2}Λ³.
    pub fn mixed(p: i32) -> FamilyRow {
        FamilyRow {
            name: format!("mixed p={p}"),
            n: 3,
            slots: vec![
                Slot { family: Family::R1, degree: p, k: 0 },
                Slot { family: Family::R1, degree: p - 1, k: 1 },
                Slot { family: Family::Trimmed, degree: p - 1, k: 2 },
                Slot { family: Family::R0, degree: p - 2, k: 3 },
            ],
        }
    }

    pub fn elements(&self) -> Result<Vec<ElementDef>> {
        self.slots.iter().map(|s| ElementDef::new(s.family, s.degree, s.k, self.n)).collect()
    }

    pub fn assemble(&self, mesh: &SimplicialMesh, rule: &FrameRule) -> Result<Vec<GlobalSpace>> {
        self.elements()?.iter().map(|e| assemble_element(mesh, e, rule, false)).collect()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactnessReport {
    pub row: String,
    pub dims: Vec<usize>,
    /// Rank of each operator D_k.
    pub ranks: Vec<usize>,
    pub nullities: Vec<usize>,
    pub dd_residuals: Vec<f64>,
    pub containment_residuals: Vec<f64>,
    /// dim ker D_k − rank D_{k−1} at every slot.
    pub betti: Vec<i64>,
    pub expected_betti: Vec<i64>,
    pub alternating_sum: i64,
    pub dd_ok: bool,
    pub exact: bool,
}

impl ExactnessReport {
    pub fn pass(&self) -> bool {
        self.dd_ok && self.exact
    }
}

/// Normalized ‖A B‖_max: rows of A and columns of B scaled to unit norm.
pub fn composition_residual(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    if a.ncols() == 0 || b.ncols() == 0 || a.nrows() == 0 {
        return 0.0;
    }
    linalg::max_abs(&(linalg::normalize_rows(a) * linalg::normalize_columns(b)))
}

/// Report from spaces dimensions and operator matrices of a sequence.
pub fn report_from_operators(
    row: &str,
    dims: Vec<usize>,
    ops: &[DMatrix<f64>],
    containment_residuals: Vec<f64>,
    expected_betti: &[i64],
) -> ExactnessReport {
    let ranks: Vec<usize> = ops.iter().map(linalg::rank).collect();
    let nullities: Vec<usize> = ops.iter().zip(&dims).map(|(m, &d)| d - linalg::rank(m)).collect();
    let dd_residuals: Vec<f64> = ops.windows(2).map(|w| composition_residual(&w[1], &w[0])).collect();
    let mut betti = Vec::with_capacity(dims.len());
    for k in 0..dims.len() {
        let kernel = if k < ranks.len() { dims[k] - ranks[k] } else { dims[k] };
        let image = if k > 0 { ranks[k - 1] } else { 0 };
        betti.push(kernel as i64 - image as i64);
    }
    let alternating_sum = dims.iter().enumerate().map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
    let mut expected: Vec<i64> = expected_betti.to_vec();
    expected.resize(dims.len(), 0);
    let dd_ok = dd_residuals.iter().all(|&r| r < DD_TOL);
    let exact = betti == expected;
    ExactnessReport {
        row: row.to_string(),
        dims,
        ranks,
        nullities,
        dd_residuals,
        containment_residuals,
        betti,
        expected_betti: expected,
        alternating_sum,
        dd_ok,
        exact,
    }
}

/// Assembled operators D_k of a row.
pub fn row_operators(spaces: &[GlobalSpace]) -> Result<Vec<OperatorMatrix>> {
    spaces.windows(2).map(|w| assemble_d(&w[0], &w[1])).collect()
}

pub fn verify_exactness(mesh: &SimplicialMesh, row: &FamilyRow, expected_betti: &[i64]) -> Result<ExactnessReport> {
    verify_exactness_with(mesh, row, expected_betti, &FrameRule::default())
}

pub fn verify_exactness_with(
    mesh: &SimplicialMesh,
    row: &FamilyRow,
    expected_betti: &[i64],
    rule: &FrameRule,
) -> Result<ExactnessReport> {
    let spaces = row.assemble(mesh, rule)?;
    let ops = row_operators(&spaces)?;
    let dense: Vec<DMatrix<f64>> = ops.iter().map(|o| o.to_dense()).collect();
    Ok(report_from_operators(
        &row.name,
        spaces.iter().map(|s| s.dim()).collect(),
        &dense,
        ops.iter().map(|o| o.residual).collect(),
        expected_betti,
    ))
}

/// Exactness of a sequence of constraint-defined spaces.
pub fn verify_discrete_sequence(name: &str, spaces: &[DiscreteSpace], expected_betti: &[i64]) -> Result<ExactnessReport> {
    let mut ops = Vec::new();
    let mut res = Vec::new();
    for w in spaces.windows(2) {
        let (m, r) = discrete_d(&w[0], &w[1])?;
        ops.push(m);
        res.push(r);
    }
    Ok(report_from_operators(name, spaces.iter().map(|s| s.dim()).collect(), &ops, res, expected_betti))
}

pub fn mixed_sequence(mesh: &SimplicialMesh, p: i32) -> Result<ExactnessReport> {
    verify_exactness(mesh, &FamilyRow::mixed(p), &contractible_betti(3))
}

pub fn contractible_betti(n: usize) -> Vec<i64> {
    let mut b = vec![0; n + 1];
    b[0] = 1;
    b
}

/// Betti numbers of the simplicial complex from integer ranks of boundary maps.
pub fn simplicial_betti(mesh: &SimplicialMesh) -> Vec<i64> {
    let n = mesh.dim();
    let mut ranks = vec![0usize; n + 2];
    for d in 1..=n {
        let rows: Vec<Vec<i64>> = mesh
            .simplices(d)
            .iter()
            .map(|s| {
                let mut row = vec![0i64; mesh.count(d - 1)];
                for (i, face) in subsets(s, d).into_iter().enumerate() {
                    // face i omits vertex d − i
                    let omitted = d - i;
                    let id = mesh.simplex_id(&face).expect("face is stored");
                    row[id] += if omitted % 2 == 0 { 1 } else { -1 };
                }
                row
            })
            .collect();
        ranks[d] = linalg::integer_rank(&rows);
    }
    (0..=n).map(|d| mesh.count(d) as i64 - ranks[d] as i64 - ranks[d + 1] as i64).collect()
}

/// Rank of div from the H(div) element hz of degree q onto discontinuous P_{q−1}, and the target dimension.
pub fn hz_divergence(mesh: &SimplicialMesh, q: i32) -> Result<(usize, usize)> {
    let rule = FrameRule::default();
    let src = assemble_element(mesh, &ElementDef::new(Family::HuZhang, q, 2, 3)?, &rule, false)?;
    let dst = assemble_element(mesh, &ElementDef::new(Family::R0, q - 1, 3, 3)?, &rule, false)?;
    let d = assemble_d(&src, &dst)?;
    Ok((linalg::rank(&d.to_dense()), dst.dim()))
}
