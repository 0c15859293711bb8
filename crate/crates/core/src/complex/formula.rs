//! Closed-form global dimensions and the DoF comparison of the curl elements.

use serde::{Deserialize, Serialize};

use super::space::count_dofs;
use crate::combinatorics::binomial;
use crate::elements::{ElementDef, Family};
use crate::mesh::SimplicialMesh;
use crate::polyspace::{dim_full, dim_trimmed};
use crate::Result;

/// Simplex counts V, E, F, T (missing entries are zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub v: i64,
    pub e: i64,
    pub f: i64,
    pub t: i64,
}

impl Counts {
    pub fn of(mesh: &SimplicialMesh) -> Counts {
        let c = mesh.counts();
        let get = |i: usize| c.get(i).copied().unwrap_or(0) as i64;
        Counts { v: get(0), e: get(1), f: get(2), t: get(3) }
    }

    fn by_dim(&self, d: usize) -> i64 {
        [self.v, self.e, self.f, self.t][d]
    }
}

fn c(n: i64, k: i64) -> i64 {
    binomial(n, k)
}

/// Closed-form global dimension of a family on a mesh with the given counts.
pub fn dim_formula(family: Family, q: i32, k: usize, n: usize, counts: Counts) -> Option<i64> {
    let Counts { v, e, f, t } = counts;
    let q = q as i64;
    // per-entity sums for moment-based classical spaces
    let classical = |trim: bool| -> i64 {
        (k..=n)
            .map(|d| {
                let deg = q + k as i64 - d as i64;
                let per = if trim {
                    dim_full(d, (deg - 1) as i32, d - k)
                } else {
                    dim_trimmed(d, deg as i32, d - k)
                };
                per as i64 * counts.by_dim(d)
            })
            .sum()
    };
    use Family::*;
    let val = match (family, n, k) {
        (R0, _, _) => classical(false),
        (Trimmed, _, _) => classical(true),
        (R1, 1, 0) => 2 * v + (q - 3) * e,
        (R1, 1, 1) => v + (q - 1) * e,
        (R2, 1, 0) => 3 * v + (q - 5) * e,
        (R2, 1, 1) => 2 * v + (q - 3) * e,
        (R1, 2, 0) => 3 * v + (q - 3) * e + c(q - 1, 2) * f,
        (R1, 2, 1) => 2 * v + (q - 1) * e + (q * q - 1) * f,
        (R1, 2, 2) => c(q + 2, 2) * f,
        (R2, 2, 0) => 6 * v + ((q - 5) + (q - 4)) * e + c(q - 4, 2) * f,
        (R2, 2, 1) | (VectorHermite, 2, 1) => 2 * (3 * v + (q - 3) * e + c(q - 1, 2) * f),
        (R2, 2, 2) => v + (c(q + 2, 2) - 3) * f,
        (R1, 3, 0) => 4 * v + (q - 3) * e + c(q - 1, 2) * f + c(q - 1, 3) * t,
        (R1, 3, 1) => 3 * v + (q - 1) * e + (q - 1) * (q + 1) * f + (q - 1) * (q - 2) * (q + 1) / 2 * t,
        (R1, 3, 2) => c(q + 2, 2) * f + (q - 1) * c(q + 2, 2) * t,
        (R1, 3, 3) | (R2, 3, 3) => c(q + 3, 3) * t,
        (R2, 3, 0) => 10 * v + (2 * (q - 4) + (q - 5)) * e + c(q - 4, 2) * f + c(q - 1, 3) * t,
        (R2, 3, 1) => 12 * v + 3 * (q - 3) * e + 2 * c(q - 1, 2) * f + (q * q * q - 2 * q * q - q + 2) / 2 * t,
        (R2, 3, 2) => 3 * v + (q * q + 3 * q - 4) / 2 * f + (q - 1) * (q + 1) * (q + 2) / 2 * t,
        (HuZhang, 3, 2) => 3 * v + 2 * (q - 1) * e + c(q - 1, 2) * f + (q - 1) * (q + 1) * (q + 2) / 2 * t,
        (VectorLagrange, _, 1) => {
            n as i64 * (v + (q - 1) * e + c(q - 1, 2) * f + c(q - 1, 3) * t)
        }
        (VectorHermite, 3, 1) => 3 * (4 * v + (q - 3) * e + c(q - 1, 2) * f + c(q - 1, 3) * t),
        _ => return None,
    };
    Some(val)
}

/// Comparison of the second kind Nédélec space P_pΛ¹ with P_{2,p}Λ¹ on a 3D mesh.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DofSavings {
    pub p: i32,
    pub counts: Counts,
    pub dim_nedelec: usize,
    pub dim_new: usize,
    pub difference: i64,
    /// (p+1)E + (p+1)(p−1)F + ½(p+1)(p−1)(p−2)T
    pub nedelec_formula: i64,
    /// 12V + 3(p−3)E + 2C(p−1,2)F + (½p³−p²−½p+1)T
    pub new_formula: i64,
    /// Per-tetrahedron closed forms: ½p³+7p²+13p/2, ½p³+p²−3p−11/2, 6p²+19p/2+11/2.
    pub per_t_nedelec: f64,
    pub per_t_new: f64,
    pub per_t_difference: f64,
    /// The per-T forms multiplied by the actual T.
    pub asymptotic_nedelec: f64,
    pub asymptotic_new: f64,
    pub edge_vertex_ratio: f64,
}

pub fn per_t_closed_forms(p: i32) -> (f64, f64, f64) {
    let p = p as f64;
    (
        0.5 * p.powi(3) + 7.0 * p * p + 6.5 * p,
        0.5 * p.powi(3) + p * p - 3.0 * p - 5.5,
        6.0 * p * p + 9.5 * p + 5.5,
    )
}

pub fn dof_savings(p: i32, mesh: &SimplicialMesh) -> Result<DofSavings> {
    let counts = Counts::of(mesh);
    let ned = ElementDef::new(Family::R0, p, 1, 3)?;
    let new = ElementDef::new(Family::R2, p, 1, 3)?;
    let dim_nedelec = count_dofs(mesh, &ned);
    let dim_new = count_dofs(mesh, &new);
    let q = p as i64;
    let nedelec_formula = (q + 1) * counts.e + (q + 1) * (q - 1) * counts.f + (q + 1) * (q - 1) * (q - 2) / 2 * counts.t;
    let new_formula = dim_formula(Family::R2, p, 1, 3, counts).expect("3D r=2 formula");
    let (a, b, d) = per_t_closed_forms(p);
    Ok(DofSavings {
        p,
        counts,
        dim_nedelec,
        dim_new,
        difference: dim_nedelec as i64 - dim_new as i64,
        nedelec_formula,
        new_formula,
        per_t_nedelec: a,
        per_t_new: b,
        per_t_difference: d,
        asymptotic_nedelec: a * counts.t as f64,
        asymptotic_new: b * counts.t as f64,
        edge_vertex_ratio: counts.e as f64 / counts.v as f64,
    })
}
