//! Vertex jet sequences and per-entity bubble counts of the r = 1, 2 rows.

use serde::{Deserialize, Serialize};

use super::{ElementDef, Family};
use crate::combinatorics::{monomials, subsets};
use crate::linalg;
use crate::Result;

/// Coordinates (J, β) of J^sΛ^k: a k-subset J of the axes and a derivative
/// multi-index β with |β| ≤ s.
fn jet_coords(n: usize, k: usize, s: i64) -> Vec<(Vec<usize>, Vec<u32>)> {
    if k > n || s < 0 {
        return Vec::new();
    }
    let comps = subsets(&(0..n).collect::<Vec<_>>(), k);
    let mut out = Vec::new();
    for c in &comps {
        for t in 0..=s as usize {
            for b in &monomials(n, t).list {
                out.push((c.clone(), b.clone()));
            }
        }
    }
    out
}

/// Integer symbol matrix of d: J^sΛ^k → J^{s−1}Λ^{k+1}.
fn jet_d(n: usize, k: usize, s: i64) -> Vec<Vec<i64>> {
    let src = jet_coords(n, k, s);
    let dst = jet_coords(n, k + 1, s - 1);
    let lookup: std::collections::HashMap<_, _> = src.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    dst.iter()
        .map(|(jp, bp)| {
            let mut row = vec![0i64; src.len()];
            for (m, &a) in jp.iter().enumerate() {
                let mut j = jp.clone();
                j.remove(m);
                let mut b = bp.clone();
                b[a] += 1;
                let col = lookup[&(j, b)];
                row[col] += if m % 2 == 0 { 1 } else { -1 };
            }
            row
        })
        .collect()
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>], inner: usize) -> Vec<Vec<i64>> {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|ra| (0..cols).map(|c| (0..inner).map(|i| ra[i] * b[i][c]).sum()).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JetReport {
    pub n: usize,
    pub r: usize,
    /// 1 (constants), dim J^rΛ⁰, …, dim J⁰Λ^r, 0.
    pub dims: Vec<usize>,
    /// Ranks of d on J^{r−k}Λ^k, k = 0..r−1.
    pub ranks: Vec<usize>,
    pub kernel_first: usize,
    pub composition_zero: bool,
    pub exact: bool,
}

pub fn jet_complex_ranks(n: usize, r: usize) -> JetReport {
    let space_dims: Vec<usize> = (0..=r).map(|k| jet_coords(n, k, (r - k) as i64).len()).collect();
    let mats: Vec<Vec<Vec<i64>>> = (0..r).map(|k| jet_d(n, k, (r - k) as i64)).collect();
    let ranks: Vec<usize> = mats.iter().map(|m| linalg::integer_rank(m)).collect();
    let composition_zero = (0..r.saturating_sub(1)).all(|k| {
        matmul(&mats[k + 1], &mats[k], space_dims[k + 1]).iter().all(|row| row.iter().all(|&v| v == 0))
    });
    let rank_at = |k: usize| if k < ranks.len() { ranks[k] } else { 0 };
    let kernel_first = space_dims[0] - rank_at(0);
    let mut exact = kernel_first == 1 && composition_zero;
    for k in 1..=r {
        exact &= space_dims[k] - rank_at(k) == rank_at(k - 1);
    }
    let mut dims = vec![1];
    dims.extend(space_dims);
    dims.push(0);
    JetReport { n, r, dims, ranks, kernel_first, composition_zero, exact }
}

/// DoF counts of each form degree attached to one sub-simplex of a given dimension.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntityBubbleCounts {
    pub dim: usize,
    /// counts[k]: DoFs of the k-form element attached to the sub-simplex.
    pub counts: Vec<usize>,
    /// Same counts obtained as shape dimension minus the rank of all other DoFs.
    pub rank_counts: Vec<usize>,
    /// Σ_k (−1)^k counts[k] − (−1)^dim; zero when the local bubble sequence
    /// (with the constants quotient at the sub-simplex dimension) is exact.
    pub defect: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BubbleDimReport {
    pub n: usize,
    pub r: usize,
    pub p: i32,
    pub degrees: Vec<i32>,
    pub entities: Vec<EntityBubbleCounts>,
    /// r = 2: ((p−5)+(n−1)(p−4), n(p−4)−1) from the closed forms.
    pub edge_formula: Option<(i64, i64)>,
    /// r = 2: (edge count of the 0-form element, edge count of the 1-form element − 1).
    pub edge_actual: Option<(i64, i64)>,
}

impl BubbleDimReport {
    pub fn exact(&self) -> bool {
        let counts_ok = self.entities.iter().all(|e| e.defect == 0 && e.counts == e.rank_counts);
        let edge_ok = match (self.edge_formula, self.edge_actual) {
            (Some(f), Some(a)) => f == a && f.0 == f.1,
            _ => true,
        };
        counts_ok && edge_ok
    }
}

/// Elements of the row P_{r,p}Λ⁰ → … → P_{r,p−n}Λ^n.
pub fn row_elements(n: usize, r: usize, p: i32) -> Result<Vec<ElementDef>> {
    let fam = match r {
        0 => Family::R0,
        1 => Family::R1,
        _ => Family::R2,
    };
    (0..=n).map(|k| ElementDef::new(fam, p - k as i32, k, n)).collect()
}

fn rank_count(elem: &ElementDef, dim: usize) -> usize {
    let s = crate::polyspace::Simplex::reference(elem.n);
    let m = super::dof_matrix(elem, &s);
    let others: Vec<usize> =
        (0..elem.dofs.len()).filter(|&i| !(elem.dofs[i].entity.dim == dim && elem.dofs[i].entity.index == 0)).collect();
    let sub = nalgebra::DMatrix::from_fn(others.len(), m.ncols(), |i, j| m[(others[i], j)]);
    m.ncols() - linalg::rank(&linalg::normalize_rows(&sub))
}

pub fn subsimplex_bubble_dims(n: usize, r: usize, p: i32) -> Result<BubbleDimReport> {
    let elems = row_elements(n, r, p)?;
    let mut entities = Vec::new();
    for d in 0..=n {
        let counts: Vec<usize> = elems.iter().map(|e| e.dofs_per_entity(d)).collect();
        let rank_counts: Vec<usize> = elems.iter().map(|e| rank_count(e, d)).collect();
        let alt: i64 = counts.iter().enumerate().map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) }).sum();
        let sign = if d % 2 == 0 { 1 } else { -1 };
        entities.push(EntityBubbleCounts { dim: d, counts, rank_counts, defect: alt - sign });
    }
    let (edge_formula, edge_actual) = if r == 2 && n >= 1 {
        let (p, n64) = (p as i64, n as i64);
        let e = &entities[1];
        (
            Some(((p - 5) + (n64 - 1) * (p - 4), n64 * (p - 4) - 1)),
            Some((e.counts[0] as i64, e.counts[1] as i64 - 1)),
        )
    } else {
        (None, None)
    };
    Ok(BubbleDimReport { n, r, p, degrees: elems.iter().map(|e| e.degree).collect(), entities, edge_formula, edge_actual })
}
