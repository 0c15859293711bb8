//! 2D BGG construction: vector- and skew-valued discrete forms linked by S₀
//! and S₁, the Ξ product complex, its projection onto Γ, and the Hu-Zhang
//! stress row obtained by imposing symmetry.
//!
//! Skew-valued forms are scalar forms carrying an implicit factor χ. A
//! vector-valued form is two scalar forms, one per vector component, with
//! broken coordinates laid out copy-major over the whole mesh.

mod stress;

#[cfg(test)]
mod tests;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

pub use stress::{
    huzhang_stress, symmetric_bubble_basis, HuZhangStressElement, MatrixPart, StressCounts, StressDof,
    StressUnisolvence, MIN_STRESS_DEGREE,
};

use crate::complex::{
    characterized_space, composition_residual, family_conditions, local_d, report_from_operators, represent,
    simplicial_betti, DiscreteSpace, ExactnessReport, OperatorMatrix,
};
use crate::elements::Family;
use crate::linalg;
use crate::mesh::SimplicialMesh;
use crate::polyspace::{ops, scalar, FormSpace, Simplex};
use crate::{Error, Result};

/// Tolerance for ‖D₁S₀ + S₁D₀‖_max and the commuting diagrams.
pub const IDENTITY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValueType {
    /// 𝕍 = ℝ², two scalar copies.
    Vector,
    /// 𝕂 ≅ ℝ through χ, one scalar copy.
    Skew,
}

#[derive(Clone, Debug)]
pub struct ValuedSpace {
    pub base: DiscreteSpace,
    pub values: ValueType,
}

impl ValuedSpace {
    pub fn copies(&self) -> usize {
        match self.values {
            ValueType::Vector => 2,
            ValueType::Skew => 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.copies() * self.base.dim()
    }

    pub fn k(&self) -> usize {
        self.base.k
    }

    pub fn degree(&self) -> i32 {
        self.base.space.degree
    }

    pub fn label(&self) -> String {
        let v = match self.values {
            ValueType::Vector => "V",
            ValueType::Skew => "K",
        };
        format!("{}({v})", self.base.label)
    }

    /// Broken coordinates of the basis, one block per copy.
    pub fn basis(&self) -> DMatrix<f64> {
        let blocks: Vec<&DMatrix<f64>> = std::iter::repeat(&self.base.basis).take(self.copies()).collect();
        linalg::block_diag(&blocks)
    }
}

/// P_{r,degree}Λ^k(T², values) as a constraint-characterized space.
pub fn valued_space(mesh: &SimplicialMesh, r: usize, k: usize, degree: i32, values: ValueType) -> Result<ValuedSpace> {
    if mesh.dim() != 2 {
        return Err(Error::InvalidArgument("the BGG construction is implemented in 2D only".into()));
    }
    let family = match r {
        1 => Family::R1,
        2 => Family::R2,
        _ => return Err(Error::InvalidArgument(format!("BGG rows use r=1 or r=2, got {r}"))),
    };
    let label = format!("P_{{{r},{degree}}}L{k}");
    let base = characterized_space(mesh, k, degree, &family_conditions(family, k, 2), &label)?;
    Ok(ValuedSpace { base, values })
}

/// Broken matrix from per-cell local blocks in copy-major local layout.
fn cellwise<F>(mesh: &SimplicialMesh, src: (FormSpace, usize), dst: (FormSpace, usize), local: F) -> DMatrix<f64>
where
    F: Fn(&Simplex) -> DMatrix<f64>,
{
    let nc = mesh.n_cells();
    let (si, ci) = (src.0.dim(), src.1);
    let (so, co) = (dst.0.dim(), dst.1);
    let mut big = DMatrix::zeros(co * nc * so, ci * nc * si);
    for cell in 0..nc {
        let l = local(&mesh.cell_simplex(cell));
        for a in 0..co {
            for b in 0..ci {
                let block = l.view((a * so, b * si), (so, si));
                big.view_mut((a * nc * so + cell * so, b * nc * si + cell * si), (so, si)).copy_from(&block);
            }
        }
    }
    big
}

/// Broken linear map of a valued space expressed in a target valued space.
fn discrete_map<F>(mesh: &SimplicialMesh, src: &ValuedSpace, dst: &ValuedSpace, op: &str, local: F) -> Result<(DMatrix<f64>, f64)>
where
    F: Fn(&Simplex) -> DMatrix<f64>,
{
    let big = cellwise(mesh, (src.base.space, src.copies()), (dst.base.space, dst.copies()), local);
    represent(&dst.basis(), &(big * src.basis()), &format!("{op}: {} -> {}", src.label(), dst.label()))
}

/// d applied componentwise.
pub fn valued_d(mesh: &SimplicialMesh, src: &ValuedSpace, dst: &ValuedSpace) -> Result<(DMatrix<f64>, f64)> {
    if src.values != dst.values || dst.k() != src.k() + 1 {
        return Err(Error::DimensionMismatch(format!("no d from {} to {}", src.label(), dst.label())));
    }
    let dl = local_d(src.base.space, dst.base.space)?;
    let blocks: Vec<&DMatrix<f64>> = std::iter::repeat(&dl).take(src.copies()).collect();
    let local = linalg::block_diag(&blocks);
    discrete_map(mesh, src, dst, "d", |_| local.clone())
}

/// Local S₀ on one cell: (u₁,u₂) ↦ −u₂ dx¹ + u₁ dx² with dx^a = Σ_i (v_i − v_0)_a dλ_i.
fn s0_local(simplex: &Simplex, degree: i32) -> DMatrix<f64> {
    let m = FormSpace::new(2, degree, 0).dim();
    let e = simplex.edge_matrix();
    let mut l = DMatrix::zeros(2 * m, 2 * m);
    for comp in 0..2 {
        for mono in 0..m {
            l[(comp * m + mono, mono)] = e[(comp, 1)];
            l[(comp * m + mono, m + mono)] = -e[(comp, 0)];
        }
    }
    l
}

/// Local S₁ on one cell: vector 1-form ↦ −(w₁₁ + w₂₂) dx¹∧dx².
fn s1_local(simplex: &Simplex, degree: i32) -> DMatrix<f64> {
    let m = FormSpace::new(2, degree, 0).dim();
    let c = ops::cartesian_matrix(2, 1, &simplex.gradients());
    let area = ops::frame_matrix(2, 2, &simplex.edge_matrix())[(0, 0)];
    let mut l = DMatrix::zeros(m, 4 * m);
    for mono in 0..m {
        for comp in 0..2 {
            // w₁₁: dx¹ part of copy 0; w₂₂: dx² part of copy 1.
            l[(mono, comp * m + mono)] = -area * c[(0, comp)];
            l[(mono, 2 * m + comp * m + mono)] = -area * c[(1, comp)];
        }
    }
    l
}

fn check_pair(src: &ValuedSpace, dst: &ValuedSpace, k: usize) -> Result<()> {
    if src.values != ValueType::Vector || dst.values != ValueType::Skew || src.k() != k || dst.k() != k + 1 {
        return Err(Error::DimensionMismatch(format!("S{k} needs vector Λ{k} -> skew Λ{}", k + 1)));
    }
    if src.degree() != dst.degree() {
        return Err(Error::DimensionMismatch(format!(
            "S{k} preserves degree, got {} -> {}",
            src.degree(),
            dst.degree()
        )));
    }
    Ok(())
}

/// S₀ : P_{1,q}Λ⁰(𝕍) → P_{2,q}Λ¹(𝕂), required square.
pub fn s0_operator(mesh: &SimplicialMesh, src: &ValuedSpace, dst: &ValuedSpace) -> Result<OperatorMatrix> {
    check_pair(src, dst, 0)?;
    if src.dim() != dst.dim() {
        return Err(Error::DimensionMismatch(format!("S0 between spaces of dimension {} and {}", src.dim(), dst.dim())));
    }
    let q = src.degree();
    let (m, r) = discrete_map(mesh, src, dst, "S0", |s| s0_local(s, q))?;
    Ok(OperatorMatrix::from_dense(&m, r))
}

/// S₁ : P_{1,q}Λ¹(𝕍) → P_{2,q}Λ²(𝕂).
pub fn s1_operator(mesh: &SimplicialMesh, src: &ValuedSpace, dst: &ValuedSpace) -> Result<OperatorMatrix> {
    check_pair(src, dst, 1)?;
    let q = src.degree();
    let (m, r) = discrete_map(mesh, src, dst, "S1", |s| s1_local(s, q))?;
    Ok(OperatorMatrix::from_dense(&m, r))
}

/// The two rows of the BGG diagram for one p with all operators.
#[derive(Clone, Debug)]
pub struct BggDiagram {
    pub p: i32,
    /// P_{2,p+3}Λ⁰(𝕂), P_{2,p+2}Λ¹(𝕂), P_{2,p+1}Λ²(𝕂).
    pub top: Vec<ValuedSpace>,
    /// P_{1,p+2}Λ⁰(𝕍), P_{1,p+1}Λ¹(𝕍), P_{1,p}Λ²(𝕍).
    pub bottom: Vec<ValuedSpace>,
    pub d_top: Vec<DMatrix<f64>>,
    pub d_bottom: Vec<DMatrix<f64>>,
    pub s0: DMatrix<f64>,
    pub s1: DMatrix<f64>,
    /// Largest containment residual met while building the operators.
    pub containment: f64,
}

impl BggDiagram {
    pub fn build(mesh: &SimplicialMesh, p: i32) -> Result<Self> {
        if p < 1 {
            return Err(Error::DegreeTooLow { family: "bgg".into(), k: 0, n: 2, degree: p, min: 1 });
        }
        let top = (0..3)
            .map(|k| valued_space(mesh, 2, k, p + 3 - k as i32, ValueType::Skew))
            .collect::<Result<Vec<_>>>()?;
        let bottom = (0..3)
            .map(|k| valued_space(mesh, 1, k, p + 2 - k as i32, ValueType::Vector))
            .collect::<Result<Vec<_>>>()?;
        let mut containment = 0.0f64;
        let mut d_top = Vec::new();
        let mut d_bottom = Vec::new();
        for k in 0..2 {
            let (a, ra) = valued_d(mesh, &top[k], &top[k + 1])?;
            let (b, rb) = valued_d(mesh, &bottom[k], &bottom[k + 1])?;
            containment = containment.max(ra).max(rb);
            d_top.push(a);
            d_bottom.push(b);
        }
        let s0 = s0_operator(mesh, &bottom[0], &top[1])?;
        let s1 = s1_operator(mesh, &bottom[1], &top[2])?;
        containment = containment.max(s0.residual).max(s1.residual);
        Ok(BggDiagram { p, top, bottom, d_top, d_bottom, s0: s0.to_dense(), s1: s1.to_dense(), containment })
    }

    /// ‖D₁S₀ + S₁D₀‖_max.
    pub fn identity_residual(&self) -> f64 {
        linalg::max_abs(&(&self.d_top[1] * &self.s0 + &self.s1 * &self.d_bottom[0]))
    }

    pub fn s0_inverse(&self) -> Result<DMatrix<f64>> {
        self.s0.clone().try_inverse().ok_or(Error::Singular(0.0))
    }

    pub fn block(&self, k: usize) -> BlockOperator {
        BlockOperator {
            d_top: self.d_top[k].clone(),
            s: if k == 0 { self.s0.clone() } else { self.s1.clone() },
            d_bottom: self.d_bottom[k].clone(),
        }
    }

    /// dim Ξ^k = dim top_k + dim bottom_k.
    pub fn xi_dims(&self) -> Vec<usize> {
        (0..3).map(|k| self.top[k].dim() + self.bottom[k].dim()).collect()
    }
}

/// 𝒜_k = [[d_k, −S_k], [0, d_k]] on Ξ^k = top × bottom.
#[derive(Clone, Debug)]
pub struct BlockOperator {
    pub d_top: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub d_bottom: DMatrix<f64>,
}

impl BlockOperator {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let (tr, tc) = self.d_top.shape();
        let (br, bc) = self.d_bottom.shape();
        assert_eq!(self.s.shape(), (tr, bc), "S block does not fit");
        let mut m = DMatrix::zeros(tr + br, tc + bc);
        m.view_mut((0, 0), (tr, tc)).copy_from(&self.d_top);
        m.view_mut((0, tc), (tr, bc)).copy_from(&(-&self.s));
        m.view_mut((tr, tc), (br, bc)).copy_from(&self.d_bottom);
        m
    }
}

/// Cohomology of the BGG complexes: that of the mesh tensored with the
/// three-dimensional space of rigid motions.
pub fn rigid_betti(mesh: &SimplicialMesh) -> Vec<i64> {
    simplicial_betti(mesh).iter().map(|b| 3 * b).collect()
}

/// Exactness of Ξ_{p+2}⁰ → Ξ_{p+1}¹ → Ξ_p² → 0.
pub fn xi_complex(mesh: &SimplicialMesh, p: i32) -> Result<ExactnessReport> {
    let diag = BggDiagram::build(mesh, p)?;
    Ok(xi_report(&diag, &rigid_betti(mesh)))
}

pub fn xi_report(diag: &BggDiagram, expected_betti: &[i64]) -> ExactnessReport {
    let ops = [diag.block(0).to_dense(), diag.block(1).to_dense()];
    report_from_operators(
        &format!("xi p={}", diag.p),
        diag.xi_dims(),
        &ops,
        vec![diag.containment; 2],
        expected_betti,
    )
}

/// Residuals of the Γ diagram: 𝒜₀π⁰ − π¹𝒜₀, 𝒜₁π¹ − 𝒜₁, and the Γ⁰
/// constraint d₀ω − S₀μ on the image of π⁰.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaReport {
    pub first_square: f64,
    pub second_square: f64,
    pub gamma0_membership: f64,
}

impl GammaReport {
    pub fn max(&self) -> f64 {
        self.first_square.max(self.second_square).max(self.gamma0_membership)
    }
}

/// π⁰ and π¹ as matrices on Ξ⁰ and Ξ¹.
pub fn projections(diag: &BggDiagram) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let inv = diag.s0_inverse()?;
    let (t0, b0) = (diag.top[0].dim(), diag.bottom[0].dim());
    let (t1, b1) = (diag.top[1].dim(), diag.bottom[1].dim());
    let mut pi0 = DMatrix::zeros(t0 + b0, t0 + b0);
    pi0.view_mut((0, 0), (t0, t0)).copy_from(&DMatrix::identity(t0, t0));
    pi0.view_mut((t0, 0), (b0, t0)).copy_from(&(&inv * &diag.d_top[0]));
    let mut pi1 = DMatrix::zeros(t1 + b1, t1 + b1);
    pi1.view_mut((t1, 0), (b1, t1)).copy_from(&(&diag.d_bottom[0] * &inv));
    pi1.view_mut((t1, t1), (b1, b1)).copy_from(&DMatrix::identity(b1, b1));
    Ok((pi0, pi1))
}

pub fn gamma_report(diag: &BggDiagram) -> Result<GammaReport> {
    let (pi0, pi1) = projections(diag)?;
    let a0 = diag.block(0).to_dense();
    let a1 = diag.block(1).to_dense();
    let t0 = diag.top[0].dim();
    let mut constraint = DMatrix::zeros(diag.top[1].dim(), pi0.nrows());
    constraint.view_mut((0, 0), (diag.top[1].dim(), t0)).copy_from(&diag.d_top[0]);
    constraint.view_mut((0, t0), diag.s0.shape()).copy_from(&(-&diag.s0));
    Ok(GammaReport {
        first_square: linalg::max_abs(&(&a0 * &pi0 - &pi1 * &a0)),
        second_square: linalg::max_abs(&(&a1 * &pi1 - &a1)),
        gamma0_membership: linalg::max_abs(&(constraint * pi0)),
    })
}

/// Discrete inclusion i_h : P_{2,p+1}Λ²(𝕂) → P_{1,p+1}Λ¹(𝕍).
///
/// For ω = v dx¹∧dx² (times χ) the image is the stress-element function
/// whose skew DoFs (vertex values and interior moments of M₁₂ − M₂₁) equal
/// those of −v and whose other DoFs vanish. With this scaling i_h S₁u has
/// the skew DoFs of u.
pub fn inclusion(mesh: &SimplicialMesh, diag: &BggDiagram) -> Result<DMatrix<f64>> {
    let q = diag.p + 1;
    let elem = HuZhangStressElement::new(q)?;
    let src = &diag.top[2];
    let dst = &diag.bottom[1];
    let table = crate::combinatorics::monomials(3, q as usize);
    let m = table.len();
    let local = |simplex: &Simplex| -> DMatrix<f64> {
        let dofs = elem.dof_matrix(simplex);
        let phi = dofs.try_inverse().expect("stress element is unisolvent");
        let kappa = ops::cartesian_matrix(2, 2, &simplex.gradients())[(0, 0)];
        let area = simplex.measure();
        let mut g = DMatrix::zeros(elem.dofs.len(), m);
        for (r, dof) in elem.dofs.iter().enumerate() {
            for (i, alpha) in table.list.iter().enumerate() {
                let mono: scalar::ScalarPoly = vec![(alpha.clone(), 1.0)];
                g[(r, i)] = match dof {
                    StressDof::VertexValue { vertex, part: MatrixPart::Skew } => {
                        -kappa * scalar::value_at_vertex(&mono, *vertex)
                    }
                    StressDof::InteriorSkewMoment { test } => -kappa * scalar::integrate_against(&mono, test, area),
                    _ => 0.0,
                };
            }
        }
        let to_entries = entries_from_frame(simplex, q);
        to_entries.try_inverse().expect("frame change is invertible") * phi * g
    };
    let big = cellwise(mesh, (src.base.space, 1), (dst.base.space, 2), local);
    let (ih, _) = represent(&dst.basis(), &(big * src.basis()), "i_h")?;
    Ok(ih)
}

/// Matrix entries [M11|M12|M21|M22] of a vector 1-form given in frame
/// coordinates: row i of M is (−w_{i2}, w_{i1}).
pub fn entries_from_frame(simplex: &Simplex, degree: i32) -> DMatrix<f64> {
    let m = FormSpace::new(2, degree, 0).dim();
    let c = ops::cartesian_matrix(2, 1, &simplex.gradients());
    let mut t = DMatrix::zeros(4 * m, 4 * m);
    for row in 0..2 {
        for comp in 0..2 {
            for mono in 0..m {
                let col = row * 2 * m + comp * m + mono;
                t[((2 * row) * m + mono, col)] = -c[(1, comp)];
                t[((2 * row + 1) * m + mono, col)] = c[(0, comp)];
            }
        }
    }
    t
}

/// Bottom row of the Hu-Zhang diagram and its commuting checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HuZhangRowReport {
    pub p: i32,
    pub exactness: ExactnessReport,
    /// Airy image expressed in Σ_h (relative residual).
    pub airy_containment: f64,
    /// ‖S₁(id − i_h skw)‖.
    pub symmetrization_residual: f64,
    /// ‖(id − i_h skw)·Airy − Airy‖.
    pub first_square: f64,
    /// ‖d₁(id − i_h skw) − Π_h(−S₁, d₁)‖.
    pub second_square: f64,
    pub sigma_dim: usize,
    pub projection_rank: usize,
    pub pi_rank: usize,
    pub target_dim: usize,
}

impl HuZhangRowReport {
    pub fn pass(&self) -> bool {
        self.pass_with(IDENTITY_TOL)
    }

    pub fn pass_with(&self, tol: f64) -> bool {
        self.exactness.pass()
            && self.symmetrization_residual < tol
            && self.first_square < tol
            && self.second_square < tol
            && self.projection_rank == self.sigma_dim
            && self.pi_rank == self.target_dim
    }
}

/// P_{2,p+3}Λ⁰(𝕂) → Σ_h → P_{1,p}Λ²(𝕍) with Airy = D₀S₀⁻¹D₀ and
/// Σ_h = ker S₁ ⊂ P_{1,p+1}Λ¹(𝕍). Needs p+1 ≥ 3 for the stress element.
pub fn huzhang_row(mesh: &SimplicialMesh, p: i32) -> Result<HuZhangRowReport> {
    let diag = BggDiagram::build(mesh, p)?;
    let inv = diag.s0_inverse()?;
    let airy = &diag.d_bottom[0] * &inv * &diag.d_top[0];
    let sigma = linalg::nullspace(&diag.s1);
    let (airy_sigma, airy_containment) = represent(&sigma, &airy, "airy")?;
    let div_sigma = &diag.d_bottom[1] * &sigma;
    let exactness = report_from_operators(
        &format!("hu-zhang p={p}"),
        vec![diag.top[0].dim(), sigma.ncols(), diag.bottom[2].dim()],
        &[airy_sigma, div_sigma],
        vec![airy_containment, 0.0],
        &rigid_betti(mesh),
    );

    let ih = inclusion(mesh, &diag)?;
    let b1 = diag.bottom[1].dim();
    let proj = DMatrix::identity(b1, b1) - &ih * &diag.s1;
    let (t2, b2) = (diag.top[2].dim(), diag.bottom[2].dim());
    let mut pi_h = DMatrix::zeros(b2, t2 + b2);
    pi_h.view_mut((0, 0), (b2, t2)).copy_from(&(&diag.d_bottom[1] * &ih));
    pi_h.view_mut((0, t2), (b2, b2)).copy_from(&DMatrix::identity(b2, b2));
    let mut weak = DMatrix::zeros(t2 + b2, b1);
    weak.view_mut((0, 0), (t2, b1)).copy_from(&(-&diag.s1));
    weak.view_mut((t2, 0), (b2, b1)).copy_from(&diag.d_bottom[1]);

    Ok(HuZhangRowReport {
        p,
        exactness,
        airy_containment,
        symmetrization_residual: linalg::max_abs(&(&diag.s1 * &proj)),
        first_square: linalg::max_abs(&(&proj * &airy - &airy)),
        second_square: linalg::max_abs(&(&diag.d_bottom[1] * &proj - &pi_h * &weak)),
        sigma_dim: sigma.ncols(),
        projection_rank: linalg::rank(&proj),
        pi_rank: linalg::rank(&pi_h),
        target_dim: b2,
    })
}

/// Everything the `bgg` command prints for one mesh and degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BggReport {
    pub p: i32,
    pub identity_residual: f64,
    pub s0_shape: (usize, usize),
    pub s0_rank: usize,
    pub s1_shape: (usize, usize),
    pub s1_rank: usize,
    pub xi: ExactnessReport,
    pub a1a0_residual: f64,
    pub gamma: GammaReport,
    pub hu_zhang_row: Option<HuZhangRowReport>,
    pub stress_counts: Vec<StressCounts>,
}

impl BggReport {
    pub fn pass(&self) -> bool {
        self.pass_with(IDENTITY_TOL)
    }

    /// Verdict with `tol` bounding the identity, Γ and Hu-Zhang residuals.
    pub fn pass_with(&self, tol: f64) -> bool {
        self.identity_residual < tol
            && self.s0_shape.0 == self.s0_shape.1
            && self.s0_rank == self.s0_shape.0
            && self.s1_rank == self.s1_shape.0
            && self.xi.pass()
            && self.gamma.max() < tol
            && self.hu_zhang_row.as_ref().map_or(true, |r| r.pass_with(tol))
            && self.stress_counts.iter().all(|c| c.identity_holds())
    }
}

pub fn bgg_report(mesh: &SimplicialMesh, p: i32) -> Result<BggReport> {
    let diag = BggDiagram::build(mesh, p)?;
    let xi = xi_report(&diag, &rigid_betti(mesh));
    let a0 = diag.block(0).to_dense();
    let a1 = diag.block(1).to_dense();
    let hu_zhang_row = if p + 1 >= MIN_STRESS_DEGREE { Some(huzhang_row(mesh, p)?) } else { None };
    let stress_counts = (MIN_STRESS_DEGREE..=MIN_STRESS_DEGREE.max(p + 1))
        .map(|q| HuZhangStressElement::new(q).map(|e| e.counts()))
        .collect::<Result<Vec<_>>>()?;
    Ok(BggReport {
        p,
        identity_residual: diag.identity_residual(),
        s0_shape: diag.s0.shape(),
        s0_rank: linalg::rank(&diag.s0),
        s1_shape: diag.s1.shape(),
        s1_rank: linalg::rank(&diag.s1),
        a1a0_residual: composition_residual(&a1, &a0),
        xi,
        gamma: gamma_report(&diag)?,
        hu_zhang_row,
        stress_counts,
    })
}
