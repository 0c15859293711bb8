use nalgebra::DMatrix;

use crate::combinatorics::factorial;
use crate::error::{Error, Result};

/// A simplex given by its vertices, possibly embedded in a higher-dimensional
/// space. Vertex order fixes the barycentric frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Simplex {
    points: Vec<Vec<f64>>,
}

impl Simplex {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidArgument("simplex needs at least one vertex".into()));
        };
        let ambient = first.len();
        if points.iter().any(|p| p.len() != ambient) {
            return Err(Error::DimensionMismatch("simplex vertices have different lengths".into()));
        }
        if points.len() > ambient + 1 {
            return Err(Error::DimensionMismatch(format!(
                "{} vertices cannot span a simplex in R^{ambient}",
                points.len()
            )));
        }
        Ok(Simplex { points })
    }

    /// Reference simplex: origin plus the unit coordinate vectors.
    pub fn reference(n: usize) -> Self {
        let mut points = vec![vec![0.0; n]];
        for i in 0..n {
            let mut p = vec![0.0; n];
            p[i] = 1.0;
            points.push(p);
        }
        Simplex { points }
    }

    pub fn dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn ambient(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// Rows are v_i - v_0 for i = 1..=d.
    pub fn edge_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        let n = self.ambient();
        DMatrix::from_fn(d, n, |i, a| self.points[i + 1][a] - self.points[0][a])
    }

    /// d-dimensional measure.
    pub fn measure(&self) -> f64 {
        let d = self.dim();
        if d == 0 {
            return 1.0;
        }
        let e = self.edge_matrix();
        let gram = &e * e.transpose();
        gram.determinant().max(0.0).sqrt() / factorial(d)
    }

    /// Signed volume of a full-dimensional simplex.
    pub fn signed_volume(&self) -> f64 {
        let d = self.dim();
        assert_eq!(d, self.ambient(), "signed volume needs a full-dimensional simplex");
        if d == 0 {
            return 1.0;
        }
        self.edge_matrix().determinant() / factorial(d)
    }

    /// Gradients of all d+1 barycentric coordinates (rows), tangential to the
    /// simplex when it is embedded.
    pub fn gradients(&self) -> DMatrix<f64> {
        let d = self.dim();
        let n = self.ambient();
        let mut g = DMatrix::zeros(d + 1, n);
        if d == 0 {
            return g;
        }
        let e = self.edge_matrix();
        let gram = &e * e.transpose();
        let inv = gram.try_inverse().expect("degenerate simplex has no barycentric gradients");
        let tail = inv * e;
        for i in 0..d {
            for a in 0..n {
                g[(i + 1, a)] = tail[(i, a)];
                g[(0, a)] -= tail[(i, a)];
            }
        }
        g
    }

    pub fn point_at(&self, bary: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.ambient()];
        for (p, &l) in self.points.iter().zip(bary) {
            for (xa, pa) in x.iter_mut().zip(p) {
                *xa += l * pa;
            }
        }
        x
    }

    /// Barycentric coordinates of a point (full-dimensional simplices).
    pub fn barycentric(&self, x: &[f64]) -> Vec<f64> {
        let g = self.gradients();
        let d = self.dim();
        let mut lam = vec![0.0; d + 1];
        for i in 1..=d {
            lam[i] = (0..self.ambient()).map(|a| g[(i, a)] * (x[a] - self.points[0][a])).sum();
        }
        lam[0] = 1.0 - lam[1..].iter().sum::<f64>();
        lam
    }

    /// Sub-simplex on the given vertex positions (in the given order).
    pub fn sub(&self, positions: &[usize]) -> Simplex {
        Simplex { points: positions.iter().map(|&i| self.points[i].clone()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_measures() {
        assert!((Simplex::reference(2).measure() - 0.5).abs() < 1e-15);
        assert!((Simplex::reference(3).measure() - 1.0 / 6.0).abs() < 1e-15);
        let edge = Simplex::new(vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0]]).unwrap();
        assert!((edge.measure() - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn gradients_are_dual_to_edges() {
        let s = Simplex::new(vec![vec![0.3, 0.1], vec![2.0, 0.4], vec![0.5, 1.7]]).unwrap();
        let g = s.gradients();
        let e = s.edge_matrix();
        for i in 0..2 {
            for j in 0..2 {
                let dot: f64 = (0..2).map(|a| g[(i + 1, a)] * e[(j, a)]).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-13);
            }
        }
        let x = s.point_at(&[0.2, 0.3, 0.5]);
        let lam = s.barycentric(&x);
        assert!((lam[0] - 0.2).abs() < 1e-13 && (lam[2] - 0.5).abs() < 1e-13);
    }
}
