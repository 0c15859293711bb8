use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, merge_sign, monomials, subsets, MonomialTable};
use crate::error::{Error, Result};

use super::geometry::Simplex;

/// Barycentric exponent vector of length n+1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Dense coordinates for homogeneous degree-p barycentric polynomial k-forms on
/// an n-simplex, written in the frame dλ_1..dλ_n. Index = component * #monomials + monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormSpace {
    pub n: usize,
    pub degree: i32,
    pub k: usize,
}

impl FormSpace {
    pub fn new(n: usize, degree: i32, k: usize) -> Self {
        assert!(k <= n, "form degree {k} exceeds dimension {n}");
        FormSpace { n, degree, k }
    }

    pub fn n_components(&self) -> usize {
        binomial(self.n as i64, self.k as i64) as usize
    }

    pub fn n_monomials(&self) -> usize {
        if self.degree < 0 {
            0
        } else {
            binomial(self.degree as i64 + self.n as i64, self.n as i64) as usize
        }
    }

    pub fn dim(&self) -> usize {
        self.n_components() * self.n_monomials()
    }

    pub fn table(&self) -> Arc<MonomialTable> {
        monomials(self.n + 1, self.degree.max(0) as usize)
    }

    /// Frame components as sorted subsets of 1..=n.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let items: Vec<usize> = (1..=self.n).collect();
        subsets(&items, self.k)
    }

    pub fn component_lookup(&self) -> HashMap<Vec<usize>, usize> {
        self.components().into_iter().enumerate().map(|(i, c)| (c, i)).collect()
    }

    pub fn index(&self, comp: usize, mono: usize) -> usize {
        comp * self.n_monomials() + mono
    }

    /// (component, exponent) for every coordinate, in index order.
    pub fn basis_labels(&self) -> Vec<(Vec<usize>, Vec<u32>)> {
        if self.degree < 0 {
            return Vec::new();
        }
        let t = self.table();
        let mut out = Vec::with_capacity(self.dim());
        for c in self.components() {
            for a in &t.list {
                out.push((c.clone(), a.clone()));
            }
        }
        out
    }

    pub fn with_degree(&self, degree: i32) -> Self {
        FormSpace { degree, ..*self }
    }
}

/// Sparse accumulator of form terms keyed by (frame component, exponent).
pub(crate) type Terms = BTreeMap<(Vec<usize>, Vec<u32>), f64>;

pub(crate) fn add_term(terms: &mut Terms, comp: Vec<usize>, alpha: Vec<u32>, c: f64) {
    if c == 0.0 {
        return;
    }
    *terms.entry((comp, alpha)).or_insert(0.0) += c;
}

/// d of one term λ^α dλ_I on an n-simplex, with dλ_0 = -Σ dλ_j.
pub(crate) fn d_term(n: usize, comp: &[usize], alpha: &[u32], c: f64, out: &mut Terms) {
    for j in 1..=n {
        if comp.contains(&j) {
            continue;
        }
        let sign = merge_sign(&[j], comp) as f64;
        let mut new_comp = comp.to_vec();
        new_comp.push(j);
        new_comp.sort_unstable();
        if alpha[j] > 0 {
            let mut a = alpha.to_vec();
            a[j] -= 1;
            add_term(out, new_comp.clone(), a, c * sign * alpha[j] as f64);
        }
        if alpha[0] > 0 {
            let mut a = alpha.to_vec();
            a[0] -= 1;
            add_term(out, new_comp, a, -c * sign * alpha[0] as f64);
        }
    }
}

/// Koszul contraction with base point at vertex 0: κ dλ_i = λ_i.
pub(crate) fn koszul_term(comp: &[usize], alpha: &[u32], c: f64, out: &mut Terms) {
    for (m, &i) in comp.iter().enumerate() {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let mut a = alpha.to_vec();
        a[i] += 1;
        let mut new_comp = comp.to_vec();
        new_comp.remove(m);
        add_term(out, new_comp, a, c * sign);
    }
}

/// Restriction of one cell 1-form dλ_i to the sub-simplex on `positions`,
/// as coefficients over dλ'_1..dλ'_d.
fn restrict_one_form(i: usize, positions: &[usize]) -> Vec<(usize, f64)> {
    let d = positions.len() - 1;
    match positions.iter().position(|&p| p == i) {
        None => Vec::new(),
        Some(0) => (1..=d).map(|j| (j, -1.0)).collect(),
        Some(j) => vec![(j, 1.0)],
    }
}

/// Trace of one term onto the sub-simplex with sorted vertex `positions`.
pub(crate) fn trace_term(comp: &[usize], alpha: &[u32], c: f64, positions: &[usize], out: &mut Terms) {
    for (i, &a) in alpha.iter().enumerate() {
        if a > 0 && !positions.contains(&i) {
            return;
        }
    }
    let sub_alpha: Vec<u32> = positions.iter().map(|&p| alpha[p]).collect();
    // Expand the wedge of restricted one-forms.
    let mut partial: Vec<(Vec<usize>, f64)> = vec![(Vec::new(), c)];
    for &i in comp {
        let factor = restrict_one_form(i, positions);
        let mut next = Vec::new();
        for (cur, coef) in &partial {
            for &(j, w) in &factor {
                if cur.contains(&j) {
                    continue;
                }
                // cur ∧ dλ'_j: move j into place from the right.
                let sign = merge_sign(cur, &[j]) as f64;
                let mut merged = cur.clone();
                merged.push(j);
                merged.sort_unstable();
                next.push((merged, coef * w * sign));
            }
        }
        partial = next;
        if partial.is_empty() {
            return;
        }
    }
    for (new_comp, coef) in partial {
        add_term(out, new_comp, sub_alpha.clone(), coef);
    }
}

/// A differential k-form on an n-simplex whose coefficients are homogeneous
/// barycentric polynomials of a fixed degree, in the frame dλ_1..dλ_n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormPolynomial {
    pub n: usize,
    pub k: usize,
    pub degree: i32,
    /// One term list per frame component (lexicographic subsets of 1..=n),
    /// each sorted by exponent with zero coefficients pruned.
    pub components: Vec<Vec<(MultiIndex, f64)>>,
}

impl FormPolynomial {
    pub fn zero(n: usize, k: usize, degree: i32) -> Self {
        let space = FormSpace::new(n, degree, k);
        FormPolynomial { n, k, degree, components: vec![Vec::new(); space.n_components()] }
    }

    pub fn space(&self) -> FormSpace {
        FormSpace::new(self.n, self.degree, self.k)
    }

    /// Single term c λ^α dλ_I.
    pub fn monomial(n: usize, comp: &[usize], alpha: &[u32], c: f64) -> Self {
        let mut terms = Terms::new();
        add_term(&mut terms, comp.to_vec(), alpha.to_vec(), c);
        Self::from_terms(n, comp.len(), alpha.iter().sum::<u32>() as i32, terms)
    }

    pub(crate) fn from_terms(n: usize, k: usize, degree: i32, terms: Terms) -> Self {
        let space = FormSpace::new(n, degree, k);
        let lookup = space.component_lookup();
        let mut components = vec![Vec::new(); space.n_components()];
        for ((comp, alpha), c) in terms {
            if c != 0.0 {
                components[lookup[&comp]].push((MultiIndex(alpha), c));
            }
        }
        for c in components.iter_mut() {
            c.sort_by(|a, b| a.0.cmp(&b.0));
        }
        FormPolynomial { n, k, degree, components }
    }

    pub(crate) fn terms(&self) -> Terms {
        let comps = self.space().components();
        let mut t = Terms::new();
        for (ci, list) in self.components.iter().enumerate() {
            for (a, c) in list {
                add_term(&mut t, comps[ci].clone(), a.0.clone(), *c);
            }
        }
        t
    }

    pub fn from_dense(space: FormSpace, coeffs: &[f64]) -> Self {
        assert_eq!(coeffs.len(), space.dim());
        let mut t = Terms::new();
        for (idx, (comp, alpha)) in space.basis_labels().into_iter().enumerate() {
            add_term(&mut t, comp, alpha, coeffs[idx]);
        }
        Self::from_terms(space.n, space.k, space.degree, t)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let space = self.space();
        let mut v = vec![0.0; space.dim()];
        if space.degree < 0 {
            return v;
        }
        let table = space.table();
        for (ci, list) in self.components.iter().enumerate() {
            for (a, c) in list {
                let mi = table.index_of(&a.0).expect("exponent of wrong degree");
                v[space.index(ci, mi)] += c;
            }
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_empty())
    }

    /// Multiply by (λ_0 + ... + λ_n)^times, raising the degree without
    /// changing the function.
    pub fn homogenize(&self, times: u32) -> Self {
        let mut cur = self.terms();
        for _ in 0..times {
            let mut next = Terms::new();
            for ((comp, alpha), c) in &cur {
                for i in 0..=self.n {
                    let mut a = alpha.clone();
                    a[i] += 1;
                    add_term(&mut next, comp.clone(), a, *c);
                }
            }
            cur = next;
        }
        Self::from_terms(self.n, self.k, self.degree + times as i32, cur)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch("adding forms of different type".into()));
        }
        let deg = self.degree.max(other.degree);
        let a = self.homogenize((deg - self.degree) as u32);
        let b = other.homogenize((deg - other.degree) as u32);
        let mut t = a.terms();
        for ((comp, alpha), c) in b.terms() {
            add_term(&mut t, comp, alpha, c);
        }
        t.retain(|_, c| *c != 0.0);
        Ok(Self::from_terms(self.n, self.k, deg, t))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for list in out.components.iter_mut() {
            for (_, c) in list.iter_mut() {
                *c *= s;
            }
            list.retain(|(_, c)| *c != 0.0);
        }
        out
    }

    pub fn exterior_derivative(&self) -> Result<Self> {
        if self.k >= self.n {
            return Err(Error::InvalidArgument(format!(
                "exterior derivative of a top-degree form (k={}, n={})",
                self.k, self.n
            )));
        }
        let mut out = Terms::new();
        for ((comp, alpha), c) in self.terms() {
            d_term(self.n, &comp, &alpha, c, &mut out);
        }
        out.retain(|_, c| *c != 0.0);
        Ok(Self::from_terms(self.n, self.k + 1, self.degree - 1, out))
    }

    pub fn koszul(&self) -> Result<Self> {
        if self.k == 0 {
            return Err(Error::InvalidArgument("Koszul contraction of a 0-form".into()));
        }
        let mut out = Terms::new();
        for ((comp, alpha), c) in self.terms() {
            koszul_term(&comp, &alpha, c, &mut out);
        }
        out.retain(|_, c| *c != 0.0);
        Ok(Self::from_terms(self.n, self.k - 1, self.degree + 1, out))
    }

    /// Trace onto the sub-simplex with the given sorted vertex positions.
    pub fn trace(&self, positions: &[usize]) -> Self {
        let d = positions.len() - 1;
        if self.k > d {
            return Self::zero(d, 0, self.degree);
        }
        let mut out = Terms::new();
        for ((comp, alpha), c) in self.terms() {
            trace_term(&comp, &alpha, c, positions, &mut out);
        }
        out.retain(|_, c| *c != 0.0);
        Self::from_terms(d, self.k, self.degree, out)
    }

    /// Frame coefficients at a barycentric point.
    pub fn frame_values(&self, bary: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|list| {
                list.iter()
                    .map(|(a, c)| c * a.0.iter().zip(bary).map(|(&e, &l)| l.powi(e as i32)).product::<f64>())
                    .sum()
            })
            .collect()
    }

    /// Cartesian components (coefficients of dx_J, J lexicographic) at a point
    /// of a full-dimensional simplex.
    pub fn evaluate(&self, simplex: &Simplex, x: &[f64]) -> Vec<f64> {
        let bary = simplex.barycentric(x);
        let frame = self.frame_values(&bary);
        let c = super::ops::cartesian_matrix(self.n, self.k, &simplex.gradients());
        (0..c.nrows()).map(|j| (0..c.ncols()).map(|i| c[(j, i)] * frame[i]).sum()).collect()
    }

    /// Text form: header "form n=<n> k=<k> p=<p>" then
    /// "component | a0 a1 ... | coefficient" per term.
    pub fn to_text(&self) -> String {
        let mut s = format!("form n={} k={} p={}\n", self.n, self.k, self.degree);
        for (ci, list) in self.components.iter().enumerate() {
            for (a, c) in list {
                let exps: Vec<String> = a.0.iter().map(|e| e.to_string()).collect();
                s.push_str(&format!("{ci} | {} | {c:?}\n", exps.join(" ")));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty form text".into()))?;
        let mut fields = HashMap::new();
        let mut parts = header.split_whitespace();
        if parts.next() != Some("form") {
            return Err(Error::Parse(format!("bad form header {header:?}")));
        }
        for p in parts {
            let (key, val) = p.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field {p:?}")))?;
            let val: i64 = val.parse().map_err(|_| Error::Parse(format!("bad header value {p:?}")))?;
            fields.insert(key.to_string(), val);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| Error::Parse(format!("header lacks {k}")));
        let (n, k, p) = (get("n")? as usize, get("k")? as usize, get("p")? as i32);
        if k > n {
            return Err(Error::Parse(format!("form degree {k} exceeds dimension {n}")));
        }
        let space = FormSpace::new(n, p, k);
        let comps = space.components();
        let mut terms = Terms::new();
        for (lineno, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split('|').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!("term line {}: expected 3 fields", lineno + 2)));
            }
            let ci: usize = cols[0].parse().map_err(|_| Error::Parse(format!("bad component {:?}", cols[0])))?;
            let alpha: Vec<u32> = cols[1]
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad exponent {t:?}"))))
                .collect::<Result<_>>()?;
            let c: f64 = cols[2].parse().map_err(|_| Error::Parse(format!("bad coefficient {:?}", cols[2])))?;
            if ci >= comps.len() || alpha.len() != n + 1 || alpha.iter().sum::<u32>() as i32 != p {
                return Err(Error::Parse(format!("term line {} does not fit the header", lineno + 2)));
            }
            add_term(&mut terms, comps[ci].clone(), alpha, c);
        }
        Ok(Self::from_terms(n, k, p, terms))
    }
}

impl fmt::Display for FormPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
