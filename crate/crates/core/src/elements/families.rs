//! DoF lists of every implemented family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dof::{local_entities, Action, Continuity, DofClass, DofFunctional, DofKind, LocalEntity, Selector};
use crate::combinatorics::monomials;
use crate::polyspace::{trimmed_matrix, FormSpace};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Lagrange, second kind Nédélec, BDM, DG with moment DoFs.
    R0,
    /// Hermite type sequence with vertex continuity of order one less than the 0-forms.
    R1,
    /// C² vertex smoothness sequence.
    R2,
    /// The H(div) element with vertex and edge-normal continuity.
    HuZhang,
    /// First kind Nédélec / Raviart-Thomas, trimmed shape space.
    Trimmed,
    VectorLagrange,
    VectorHermite,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::R0 => "0",
            Family::R1 => "1",
            Family::R2 => "2",
            Family::HuZhang => "hz",
            Family::Trimmed => "trimmed",
            Family::VectorLagrange => "vlagrange",
            Family::VectorHermite => "vhermite",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "0" | "r0" => Family::R0,
            "1" | "r1" => Family::R1,
            "2" | "r2" => Family::R2,
            "hz" | "huzhang" | "hu-zhang" => Family::HuZhang,
            "trimmed" | "0-" | "r0-" => Family::Trimmed,
            "vlagrange" | "vector-lagrange" => Family::VectorLagrange,
            "vhermite" | "vector-hermite" => Family::VectorHermite,
            other => return Err(Error::Parse(format!("unknown family '{other}'"))),
        })
    }
}

/// Moment layout follows the DoF lists; class layout splits vector moments into
/// normal and tangential parts, some of them duplicated per cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Layout {
    Moments,
    Classes,
}

/// Test space for a trace moment on a d-dimensional sub-simplex.
#[derive(Clone, Copy, Debug)]
enum Tests {
    Full(i32),
    Trimmed(i32),
    /// Scalar Bernstein monomials of degree m except the vertex ones.
    NoVertex(i32),
}

#[derive(Clone, Debug)]
pub(crate) struct Template {
    action: Action,
    continuity: Continuity,
    class: DofClass,
    test_degree: i32,
    order: usize,
}

fn axes(n: usize) -> Vec<Selector> {
    (0..n).map(Selector::Axis).collect()
}

fn jets(n: usize, comps: &[Selector], order: usize) -> Vec<Template> {
    let mut out = Vec::new();
    for &c in comps {
        for o in 0..=order {
            // derivative multi-indices of total order o, as sorted axis lists
            let mut lists: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..o {
                lists = lists
                    .into_iter()
                    .flat_map(|l| {
                        let start = l.last().copied().unwrap_or(0);
                        (start..n).map(move |a| {
                            let mut m = l.clone();
                            m.push(a);
                            m
                        })
                    })
                    .collect();
            }
            for l in lists {
                out.push(Template {
                    action: Action::Jet { component: c, derivatives: l.into_iter().map(Selector::Axis).collect() },
                    continuity: Continuity::SingleValued,
                    class: DofClass::Vertex,
                    test_degree: 0,
                    order: o,
                });
            }
        }
    }
    out
}

fn traces(d: usize, k: usize, tests: Tests, class: DofClass) -> Vec<Template> {
    if k > d {
        return Vec::new();
    }
    let tk = d - k;
    let (space, cols, deg): (FormSpace, Vec<Vec<f64>>, i32) = match tests {
        Tests::Full(m) => {
            let s = FormSpace::new(d, m, tk);
            let cols = (0..s.dim()).map(|i| unit(s.dim(), i)).collect();
            (s, cols, m)
        }
        Tests::Trimmed(m) => {
            let s = FormSpace::new(d, m, tk);
            if m < 0 {
                (s, vec![], m)
            } else {
                let t = trimmed_matrix(d, m, tk);
                (s, (0..t.ncols()).map(|j| t.column(j).iter().copied().collect()).collect(), m)
            }
        }
        Tests::NoVertex(m) => {
            let s = FormSpace::new(d, m, tk);
            let table = s.table();
            let cols = table
                .list
                .iter()
                .enumerate()
                .filter(|(_, a)| a.iter().filter(|&&x| x > 0).count() > 1)
                .map(|(i, _)| unit(s.dim(), i))
                .collect();
            (s, cols, m)
        }
    };
    cols.into_iter()
        .map(|test| Template {
            action: Action::TraceMoment { test_space: space, test },
            continuity: Continuity::SingleValued,
            class,
            test_degree: deg,
            order: 0,
        })
        .collect()
}

fn proxies(
    d: usize,
    comps: &[Selector],
    derivative: Option<Selector>,
    m: i32,
    continuity: Continuity,
    class: DofClass,
) -> Vec<Template> {
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    let table = monomials(d + 1, m as usize);
    for &c in comps {
        for beta in &table.list {
            out.push(Template {
                action: Action::ProxyMoment { component: c, derivative, test: beta.clone() },
                continuity,
                class,
                test_degree: m,
                order: usize::from(derivative.is_some()),
            });
        }
    }
    out
}

fn unit(len: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; len];
    v[i] = 1.0;
    v
}

fn face_class(n: usize, d: usize) -> DofClass {
    match d {
        0 => DofClass::Vertex,
        1 if n > 1 => DofClass::Edge,
        2 if n > 2 => DofClass::Face,
        _ => DofClass::Interior,
    }
}

/// Whether the shape space is the trimmed one instead of the full P_pΛ^k.
pub(crate) fn uses_trimmed(family: Family) -> bool {
    family == Family::Trimmed
}

/// Lowest admissible degree, or None if the family has no k-form member in dimension n.
pub fn min_degree(family: Family, k: usize, n: usize) -> Option<i32> {
    if !(1..=3).contains(&n) || k > n {
        return None;
    }
    use Family::*;
    let m = match (family, n, k) {
        (R0, _, k) => i32::from(k < n),
        (Trimmed, _, _) => 1,
        (R1, 1, 0) | (R1, 2, 0) | (R1, 3, 0) => 3,
        (R1, 1, 1) => 1,
        (R1, 2, 1) | (R1, 3, 1) => 2,
        (R1, 2, 2) => 0,
        (R1, 3, 2) => 1,
        (R1, 3, 3) => 0,
        (R2, _, 0) => 5,
        (R2, 1, 1) | (R2, 2, 1) => 3,
        (R2, 2, 2) => 1,
        (R2, 3, 1) => 4,
        (R2, 3, 2) => 3,
        (R2, 3, 3) => 2,
        (HuZhang, 3, 2) => 2,
        (VectorLagrange, 2, 1) | (VectorLagrange, 3, 1) => 1,
        (VectorHermite, 2, 1) | (VectorHermite, 3, 1) => 3,
        _ => return None,
    };
    Some(m)
}

/// DoF templates attached to a single sub-simplex of each dimension.
pub(crate) fn templates(family: Family, layout: Layout, q: i32, k: usize, n: usize) -> Vec<Vec<Template>> {
    use Family::*;
    let mut t: Vec<Vec<Template>> = vec![Vec::new(); n + 1];
    let sv = Continuity::SingleValued;
    let pc = Continuity::PerCell;
    let classes = layout == Layout::Classes;
    let r0 = |t: &mut Vec<Vec<Template>>, q: i32| {
        for d in k..=n {
            t[d] = traces(d, k, Tests::Trimmed(q + k as i32 - d as i32), face_class(n, d));
        }
    };
    match (family, n, k) {
        (R0, _, _) | (R1, 2, 2) | (R1, 3, 2) | (R1, 3, 3) | (R2, 3, 3) => r0(&mut t, q),
        (Trimmed, _, _) => {
            for d in k..=n {
                t[d] = traces(d, k, Tests::Full(q + k as i32 - d as i32 - 1), face_class(n, d));
            }
        }
        (R1, 1, 0) => {
            t[0] = jets(1, &[Selector::Scalar], 1);
            t[1] = traces(1, 0, Tests::Full(q - 4), DofClass::Interior);
        }
        (R1, 1, 1) => {
            t[0] = jets(1, &[Selector::Axis(0)], 0);
            t[1] = traces(1, 1, Tests::Full(q - 2), DofClass::Interior);
        }
        (R2, 1, 0) => {
            t[0] = jets(1, &[Selector::Scalar], 2);
            t[1] = traces(1, 0, Tests::Full(q - 6), DofClass::Interior);
        }
        (R2, 1, 1) => {
            t[0] = jets(1, &[Selector::Axis(0)], 1);
            t[1] = traces(1, 1, Tests::Full(q - 4), DofClass::Interior);
        }
        (R1, 2, 0) => {
            t[0] = jets(2, &[Selector::Scalar], 1);
            t[1] = traces(1, 0, Tests::Full(q - 4), DofClass::Edge);
            t[2] = traces(2, 0, Tests::Full(q - 3), DofClass::Interior);
        }
        (R1, 2, 1) => {
            t[0] = jets(2, &axes(2), 0);
            if classes {
                t[1] = proxies(1, &[Selector::EdgeNormal(0)], None, q - 2, sv, DofClass::EdgeNormal);
                t[1].extend(proxies(1, &[Selector::EdgeTangent], None, q - 2, pc, DofClass::EdgeTangential));
                t[2] = proxies(2, &axes(2), None, q - 3, sv, DofClass::Interior);
            } else {
                t[1] = traces(1, 1, Tests::Full(q - 2), DofClass::EdgeNormal);
                t[2] = traces(2, 1, Tests::Trimmed(q - 1), DofClass::Interior);
            }
        }
        (R2, 2, 0) => {
            t[0] = jets(2, &[Selector::Scalar], 2);
            t[1] = traces(1, 0, Tests::Full(q - 6), DofClass::Edge);
            t[1].extend(proxies(1, &[Selector::Scalar], Some(Selector::EdgeNormal(0)), q - 5, sv, DofClass::EdgeNormal));
            t[2] = traces(2, 0, Tests::Full(q - 6), DofClass::Interior);
        }
        (R2, 2, 1) | (VectorHermite, 2, 1) => {
            t[0] = jets(2, &axes(2), 1);
            t[1] = proxies(1, &axes(2), None, q - 4, sv, DofClass::Edge);
            t[2] = proxies(2, &axes(2), None, q - 3, sv, DofClass::Interior);
        }
        (R2, 2, 2) => {
            t[0] = jets(2, &[Selector::Scalar], 0);
            t[2] = traces(2, 2, Tests::NoVertex(q), DofClass::Interior);
        }
        (R1, 3, 0) => {
            t[0] = jets(3, &[Selector::Scalar], 1);
            t[1] = traces(1, 0, Tests::Full(q - 4), DofClass::Edge);
            t[2] = traces(2, 0, Tests::Full(q - 3), DofClass::Face);
            t[3] = traces(3, 0, Tests::Full(q - 4), DofClass::Interior);
        }
        (R1, 3, 1) => {
            t[0] = jets(3, &axes(3), 0);
            t[1] = traces(1, 1, Tests::Full(q - 2), DofClass::EdgeTangential);
            t[2] = traces(2, 1, Tests::Trimmed(q - 1), DofClass::FaceTangential);
            t[3] = traces(3, 1, Tests::Trimmed(q - 2), DofClass::Interior);
        }
        (R2, 3, 0) => {
            t[0] = jets(3, &[Selector::Scalar], 2);
            let normals = [Selector::EdgeNormal(0), Selector::EdgeNormal(1)];
            for nu in normals {
                t[1].extend(proxies(1, &[Selector::Scalar], Some(nu), q - 5, sv, DofClass::EdgeNormal));
            }
            t[1].extend(traces(1, 0, Tests::Full(q - 6), DofClass::Edge));
            t[2] = traces(2, 0, Tests::Full(q - 6), DofClass::Face);
            t[3] = traces(3, 0, Tests::Full(q - 4), DofClass::Interior);
        }
        (R2, 3, 1) => {
            t[0] = jets(3, &axes(3), 1);
            t[1] = proxies(1, &axes(3), None, q - 4, sv, DofClass::Edge);
            if classes {
                let tang = [Selector::FaceTangent(0), Selector::FaceTangent(1)];
                t[2] = proxies(2, &tang, None, q - 3, sv, DofClass::FaceTangential);
                t[2].extend(proxies(2, &[Selector::FaceNormal], None, q - 3, pc, DofClass::FaceNormal));
                t[3] = proxies(3, &axes(3), None, q - 4, sv, DofClass::Interior);
            } else {
                t[2] = traces(2, 1, Tests::Full(q - 3), DofClass::FaceTangential);
                t[3] = traces(3, 1, Tests::Trimmed(q - 2), DofClass::Interior);
            }
        }
        (R2, 3, 2) => {
            t[0] = jets(3, &axes(3), 0);
            t[2] = traces(2, 2, Tests::NoVertex(q), DofClass::FaceNormal);
            t[3] = traces(3, 2, Tests::Trimmed(q - 1), DofClass::Interior);
        }
        (HuZhang, 3, 2) => {
            t[0] = jets(3, &axes(3), 0);
            let normals = [Selector::EdgeNormal(0), Selector::EdgeNormal(1)];
            t[1] = proxies(1, &normals, None, q - 2, sv, DofClass::EdgeNormal);
            if classes {
                t[1].extend(proxies(1, &[Selector::EdgeTangent], None, q - 2, pc, DofClass::EdgeTangential));
                t[2] = proxies(2, &[Selector::FaceNormal], None, q - 3, sv, DofClass::FaceNormal);
                let tang = [Selector::FaceTangent(0), Selector::FaceTangent(1)];
                t[2].extend(proxies(2, &tang, None, q - 3, pc, DofClass::FaceTangential));
                t[3] = proxies(3, &axes(3), None, q - 4, sv, DofClass::Interior);
            } else {
                t[2] = traces(2, 2, Tests::Full(q - 3), DofClass::FaceNormal);
                t[3] = traces(3, 2, Tests::Trimmed(q - 1), DofClass::Interior);
            }
        }
        (VectorLagrange, _, 1) => {
            t[0] = jets(n, &axes(n), 0);
            for d in 1..=n {
                t[d] = proxies(d, &axes(n), None, q - d as i32 - 1, sv, face_class(n, d));
            }
        }
        (VectorHermite, 3, 1) => {
            t[0] = jets(3, &axes(3), 1);
            t[1] = proxies(1, &axes(3), None, q - 4, sv, DofClass::Edge);
            t[2] = proxies(2, &axes(3), None, q - 3, sv, DofClass::Face);
            t[3] = proxies(3, &axes(3), None, q - 4, sv, DofClass::Interior);
        }
        _ => unreachable!("checked by min_degree"),
    }
    t
}

pub(crate) fn expand(n: usize, per_dim: Vec<Vec<Template>>) -> Vec<DofFunctional> {
    let mut out = Vec::new();
    for (d, temps) in per_dim.into_iter().enumerate() {
        for index in 0..local_entities(n, d).len() {
            for t in &temps {
                let kind = match d {
                    0 if t.order == 0 => DofKind::PointValue,
                    0 => DofKind::PointDerivative { order: t.order },
                    d if d == n => DofKind::InteriorMoment,
                    1 => DofKind::EdgeMoment,
                    _ => DofKind::FaceMoment,
                };
                out.push(DofFunctional {
                    kind,
                    entity: LocalEntity { dim: d, index },
                    action: t.action.clone(),
                    continuity: t.continuity,
                    class: t.class,
                    test_degree: t.test_degree,
                });
            }
        }
    }
    out
}

pub(crate) fn check(family: Family, degree: i32, k: usize, n: usize) -> Result<()> {
    match min_degree(family, k, n) {
        None => Err(Error::UnsupportedElement { family: family.to_string(), k, n }),
        Some(min) if degree < min => {
            Err(Error::DegreeTooLow { family: family.to_string(), k, n, degree, min })
        }
        Some(_) => Ok(()),
    }
}
