use serde::{Deserialize, Serialize};

/// Rule for completing a 3D edge tangent to an orthonormal frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameRule {
    /// Vector orthonormalized against τ_e to give ν_{e,1}.
    pub reference: [f64; 3],
}

impl Default for FrameRule {
    fn default() -> Self {
        FrameRule { reference: [1.0, 0.0, 0.0] }
    }
}

/// Unit tangents and normals attached to an edge or face.
///
/// Edge in 2D: one tangent, one normal (tangent rotated by +90°).
/// Edge in 3D: one tangent, two normals. Face in 3D: two tangents, one
/// normal. Tangents run from the lower to the higher vertex index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frame {
    pub tangents: Vec<Vec<f64>>,
    pub normals: Vec<Vec<f64>>,
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn unit(a: Vec<f64>) -> Vec<f64> {
    let n = dot(&a, &a).sqrt();
    a.into_iter().map(|x| x / n).collect()
}

fn cross(a: &[f64], b: &[f64]) -> Vec<f64> {
    vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

impl Frame {
    /// Frame of the simplex with the given vertices, listed in ascending
    /// global index order.
    pub fn for_points(points: &[Vec<f64>], rule: &FrameRule) -> Frame {
        let ambient = points[0].len();
        match (points.len() - 1, ambient) {
            (1, 1) => Frame { tangents: vec![unit(sub(&points[1], &points[0]))], normals: vec![] },
            (1, 2) => {
                let t = unit(sub(&points[1], &points[0]));
                let n = vec![-t[1], t[0]];
                Frame { tangents: vec![t], normals: vec![n] }
            }
            (1, 3) => {
                let t = unit(sub(&points[1], &points[0]));
                let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
                let r = std::iter::once(rule.reference)
                    .chain(axes)
                    .find(|r| dot(&t, r).abs() <= 0.9 * dot(r, r).sqrt())
                    .expect("some canonical axis is transverse");
                let proj = dot(&t, &r);
                let n1 = unit(r.iter().zip(&t).map(|(ri, ti)| ri - proj * ti).collect());
                let n2 = cross(&t, &n1);
                Frame { tangents: vec![t], normals: vec![n1, n2] }
            }
            (2, 3) => {
                let e1 = sub(&points[1], &points[0]);
                let e2 = sub(&points[2], &points[0]);
                let n = unit(cross(&e1, &e2));
                let t1 = unit(e1);
                let t2 = cross(&n, &t1);
                Frame { tangents: vec![t1, t2], normals: vec![n] }
            }
            (d, a) => panic!("no frame for a {d}-simplex in R^{a}"),
        }
    }

    /// Largest deviation of the frame vectors from orthonormality.
    pub fn orthonormality_defect(&self) -> f64 {
        let all: Vec<&Vec<f64>> = self.tangents.iter().chain(&self.normals).collect();
        let mut worst = 0.0f64;
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }
}
