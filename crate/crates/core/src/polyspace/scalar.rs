//! Sparse scalar barycentric polynomials used inside DoF functionals.

use nalgebra::DMatrix;

use crate::combinatorics::{factorial, multi_factorial};

pub type ScalarPoly = Vec<(Vec<u32>, f64)>;

/// ∂_v of a polynomial on a simplex with barycentric gradients `grads`
/// (rows λ_0..λ_n).
pub fn directional_derivative(poly: &ScalarPoly, grads: &DMatrix<f64>, v: &[f64]) -> ScalarPoly {
    let slopes: Vec<f64> = (0..grads.nrows())
        .map(|i| (0..grads.ncols()).map(|a| grads[(i, a)] * v[a]).sum())
        .collect();
    let mut out: std::collections::BTreeMap<Vec<u32>, f64> = Default::default();
    for (alpha, c) in poly {
        for (i, &a) in alpha.iter().enumerate() {
            if a == 0 || slopes[i] == 0.0 {
                continue;
            }
            let mut b = alpha.clone();
            b[i] -= 1;
            *out.entry(b).or_insert(0.0) += c * a as f64 * slopes[i];
        }
    }
    out.into_iter().filter(|(_, c)| *c != 0.0).collect()
}

/// Value at vertex j, where λ_j = 1 and the others vanish.
pub fn value_at_vertex(poly: &ScalarPoly, j: usize) -> f64 {
    poly.iter()
        .filter(|(alpha, _)| alpha.iter().enumerate().all(|(i, &a)| i == j || a == 0))
        .map(|(_, c)| *c)
        .sum()
}

/// Restriction to the sub-simplex on `positions`.
pub fn restrict(poly: &ScalarPoly, positions: &[usize]) -> ScalarPoly {
    poly.iter()
        .filter(|(alpha, _)| alpha.iter().enumerate().all(|(i, &a)| a == 0 || positions.contains(&i)))
        .map(|(alpha, c)| (positions.iter().map(|&p| alpha[p]).collect(), *c))
        .collect()
}

/// ∫ poly · λ^β over a d-simplex of the given measure (poly already restricted).
pub fn integrate_against(poly: &ScalarPoly, beta: &[u32], measure: f64) -> f64 {
    let d = beta.len() - 1;
    poly.iter()
        .map(|(alpha, c)| {
            let gamma: Vec<u32> = alpha.iter().zip(beta).map(|(a, b)| a + b).collect();
            let total: u32 = gamma.iter().sum();
            c * multi_factorial(&gamma) * factorial(d) / factorial(total as usize + d)
        })
        .sum::<f64>()
        * measure
}

pub fn evaluate(poly: &ScalarPoly, bary: &[f64]) -> f64 {
    poly.iter()
        .map(|(alpha, c)| c * alpha.iter().zip(bary).map(|(&e, &l)| l.powi(e as i32)).product::<f64>())
        .sum()
}
