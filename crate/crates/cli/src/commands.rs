//! One function per subcommand. Each builds a table (the CSV schema) and a
//! JSON value, emits them, and reports whether every check passed.

use std::collections::BTreeMap;
use std::path::Path;

use derham::bgg::{bgg_report, IDENTITY_TOL};
use derham::complex::{
    boundary_counts, contractible_betti, count_dofs, dim_formula, dof_savings, restrict_homogeneous, row_operators,
    simplicial_betti, verify_exactness, Counts, FamilyRow, DD_TOL,
};
use derham::elements::{dual_basis, kronecker_residual, min_degree, unisolvence_check, ElementDef, Family, UNISOLVENCE_TOL};
use derham::mesh::{classify_boundary, generators, FrameRule, DEFAULT_COLLINEARITY_TOL};
use derham::polyspace::Simplex;
use serde::Serialize;
use serde_json::json;

use crate::input::{degrees, load_mesh, parse_betti, parse_family, parse_grid, usage, CliError, CliResult};
use crate::output::{emit, opt, sci, Table};
use crate::{Common, Outcome};

fn outcome(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn out_path(c: &Common) -> Option<&Path> {
    c.out.as_deref()
}

/// r index of the standard families.
fn family_r(family: Family) -> CliResult<usize> {
    match family {
        Family::R0 => Ok(0),
        Family::R1 => Ok(1),
        Family::R2 => Ok(2),
        other => usage(format!("family {other} has no standard row; use 0, 1 or 2")),
    }
}

fn space_name(n: usize, r: usize, k: usize) -> &'static str {
    match (n, r, k) {
        (1, 0, 0) => "Lagrange",
        (1, 1, 0) => "Hermite",
        (1, 2, 0) => "quintic Hermite",
        (1, _, 1) => "DG",
        (2, 0, 0) => "Lagrange",
        (2, 0, 1) => "BDM",
        (2, 1, 0) => "Hermite",
        (2, 1, 1) => "Stenberg",
        (2, 2, 0) => "Argyris",
        (2, 2, 1) => "vector Hermite",
        (2, 2, 2) => "Falk-Neilan",
        (2, _, 2) => "DG",
        (3, 0, 0) => "Lagrange",
        (3, 0, 1) => "Nedelec",
        (3, 0, 2) => "BDM",
        (3, 1, 0) => "Hermite",
        (3, 1, 1) | (3, 2, 1) => "new H(curl)",
        (3, 1, 2) => "BDM",
        (3, 2, 0) => "Neilan velocity",
        (3, 2, 2) => "Stenberg",
        (3, _, 3) => "DG",
        _ => "",
    }
}

fn notation(r: usize, p: i32, k: usize) -> String {
    if r == 0 {
        format!("P_{p}L{k}")
    } else {
        format!("P_{{{r},{p}}}L{k}")
    }
}

#[derive(Serialize)]
struct TableRow {
    dim: usize,
    r: usize,
    k: usize,
    p: i32,
    notation: String,
    name: &'static str,
    local_dim: Option<usize>,
    global_dim: Option<usize>,
    formula_dim: Option<i64>,
    status: &'static str,
}

pub fn tables(c: &Common) -> CliResult<Outcome> {
    let mesh = load_mesh(c.mesh.as_deref(), c.dim)?;
    let n = mesh.dim();
    let ps = degrees(c.p, c.p_range.as_deref())?.ok_or_else(|| CliError::Usage("give --p or --p-range".into()))?;
    let counts = Counts::of(&mesh);
    let mut rows = Vec::new();
    for &p in &ps {
        for r in 0..=2 {
            let family = [Family::R0, Family::R1, Family::R2][r];
            for k in 0..=n {
                if c.k.is_some_and(|kk| kk != k) {
                    continue;
                }
                let mut row = TableRow {
                    dim: n,
                    r,
                    k,
                    p,
                    notation: notation(r, p, k),
                    name: space_name(n, r, k),
                    local_dim: None,
                    global_dim: None,
                    formula_dim: None,
                    status: "below minimum degree",
                };
                if let Ok(elem) = ElementDef::new(family, p, k, n) {
                    let global = count_dofs(&mesh, &elem);
                    let formula = dim_formula(family, p, k, n, counts);
                    row.local_dim = Some(elem.dofs.len());
                    row.global_dim = Some(global);
                    row.formula_dim = formula;
                    row.status = match formula {
                        Some(f) if f != global as i64 => "formula mismatch",
                        Some(_) => "ok",
                        None => "no formula",
                    };
                }
                rows.push(row);
            }
        }
    }
    let mut table = Table::new(vec![
        "dim", "r", "k", "p", "notation", "name", "local_dim", "global_dim", "formula_dim", "status",
    ]);
    for r in &rows {
        table.push(vec![
            r.dim.to_string(),
            r.r.to_string(),
            r.k.to_string(),
            r.p.to_string(),
            r.notation.clone(),
            r.name.to_string(),
            opt(r.local_dim),
            opt(r.global_dim),
            opt(r.formula_dim),
            r.status.to_string(),
        ]);
    }
    emit(c.format, out_path(c), &table, &rows)?;
    Ok(outcome(rows.iter().all(|r| r.status != "formula mismatch")))
}

/// Smallest Λ⁰ degree for which every slot of the row exists.
fn minimal_row_degree(make: impl Fn(i32) -> FamilyRow) -> Option<i32> {
    (0..=16).find(|&q| make(q).elements().is_ok())
}

pub fn verify(c: &Common) -> CliResult<Outcome> {
    let mesh = load_mesh(c.mesh.as_deref(), c.dim)?;
    let n = mesh.dim();
    let make: Box<dyn Fn(i32) -> FamilyRow> = if c.mixed {
        if n != 3 {
            return usage("--mixed needs a 3D mesh");
        }
        Box::new(FamilyRow::mixed)
    } else {
        let r = family_r(parse_family(c.r.as_deref())?)?;
        Box::new(move |q| FamilyRow::standard(r, n, q))
    };
    let q = match c.p {
        Some(q) => q,
        None => minimal_row_degree(&make).ok_or_else(|| CliError::Usage("no valid degree for this row".into()))?,
    };
    let row = make(q);
    if let Err(e) = row.elements() {
        return usage(format!("invalid degree {q} for row {}: {e}", row.name));
    }
    let tol = c.tol.unwrap_or(DD_TOL);
    let mesh_betti = simplicial_betti(&mesh);
    let contractible = contractible_betti(n);
    let (expected, message) = match &c.betti {
        Some(text) => {
            let b = parse_betti(text)?;
            if b.len() != n + 1 {
                return usage(format!("--betti needs {} entries, got {}", n + 1, b.len()));
            }
            (b, None)
        }
        None if mesh_betti != contractible => {
            let b1 = mesh_betti.get(1).copied().unwrap_or(0);
            let msg = format!(
                "mesh is not contractible: simplicial_betti = {mesh_betti:?} (b1={b1}); pass --betti to state the expected cohomology"
            );
            (contractible.clone(), Some(msg))
        }
        None => (contractible.clone(), None),
    };
    let report = verify_exactness(&mesh, &row, &expected)?;
    let dd_ok = report.dd_residuals.iter().all(|&r| r < tol);
    let pass = dd_ok && report.exact && message.is_none();
    if let Some(m) = &message {
        eprintln!("{m}");
    }

    let mut table = Table::new(vec![
        "stage", "k", "family", "degree", "dim", "rank", "nullity", "betti", "expected_betti", "dd_residual",
        "containment_residual",
    ]);
    for (k, slot) in row.slots.iter().enumerate() {
        table.push(vec![
            if c.mixed { "mixed" } else { "standard" }.into(),
            k.to_string(),
            slot.family.to_string(),
            slot.degree.to_string(),
            report.dims[k].to_string(),
            opt(report.ranks.get(k)),
            opt(report.nullities.get(k)),
            report.betti[k].to_string(),
            report.expected_betti[k].to_string(),
            report.dd_residuals.get(k).map(|&v| sci(v)).unwrap_or_default(),
            report.containment_residuals.get(k).map(|&v| sci(v)).unwrap_or_default(),
        ]);
    }
    let json = json!({
        "row": row,
        "mesh_betti": mesh_betti,
        "tol": tol,
        "pass": pass,
        "message": message,
        "report": report,
    });
    emit(c.format, out_path(c), &table, &json)?;
    Ok(outcome(pass))
}

fn element_def(c: &Common) -> CliResult<ElementDef> {
    let family = parse_family(c.r.as_deref())?;
    let n = match (c.dim, &c.mesh) {
        (Some(n), _) => n,
        (None, Some(_)) => load_mesh(c.mesh.as_deref(), None)?.dim(),
        (None, None) => return usage("--dim is required"),
    };
    let k = c.k.ok_or_else(|| CliError::Usage("--k is required".into()))?;
    let p = match c.p {
        Some(p) => p,
        None => min_degree(family, k, n)
            .ok_or_else(|| CliError::Usage(format!("family {family} has no {k}-form element in {n}D")))?,
    };
    Ok(ElementDef::new(family, p, k, n)?)
}

pub fn element(c: &Common) -> CliResult<Outcome> {
    let elem = element_def(c)?;
    let simplex = Simplex::reference(elem.n);
    let tol = c.tol.unwrap_or(UNISOLVENCE_TOL);
    let report = unisolvence_check(&elem, &simplex, tol);
    let (classes, kron) = match dual_basis(&elem, &simplex) {
        Ok(b) => {
            let kron = kronecker_residual(&elem, &simplex, &b);
            let classes: BTreeMap<String, usize> = b.grouped().into_iter().map(|(k, v)| (k, v.len())).collect();
            (classes, Some(kron))
        }
        Err(_) => (BTreeMap::new(), None),
    };
    let per_entity: Vec<usize> = (0..=elem.n).map(|d| elem.dofs_per_entity(d)).collect();
    let pass = report.pass && kron.is_some_and(|r| r < tol);

    let mut table = Table::new(vec![
        "family", "p", "k", "n", "n_dofs", "shape_dim", "rank", "min_rel_sv", "kronecker_residual", "dofs_per_entity",
        "pass",
    ]);
    let per: Vec<String> = per_entity.iter().map(|d| d.to_string()).collect();
    table.push(vec![
        elem.family.to_string(),
        elem.degree.to_string(),
        elem.k.to_string(),
        elem.n.to_string(),
        report.n_dofs.to_string(),
        report.shape_dim.to_string(),
        report.rank.to_string(),
        sci(report.min_relative_singular_value),
        kron.map(sci).unwrap_or_default(),
        per.join(" "),
        pass.to_string(),
    ]);
    let json = json!({
        "label": elem.label(),
        "family": elem.family,
        "p": elem.degree,
        "k": elem.k,
        "n": elem.n,
        "dofs_per_entity": per_entity,
        "classes": classes,
        "unisolvence": report,
        "kronecker_residual": kron,
        "pass": pass,
    });
    emit(c.format, out_path(c), &table, &json)?;
    Ok(outcome(pass))
}

pub fn bc(c: &Common) -> CliResult<Outcome> {
    let mesh = load_mesh(c.mesh.as_deref(), c.dim)?;
    let n = mesh.dim();
    let r = family_r(parse_family(c.r.as_deref())?)?;
    let q = match c.p {
        Some(q) => q,
        None => minimal_row_degree(|q| FamilyRow::standard(r, n, q))
            .ok_or_else(|| CliError::Usage("no valid degree for this row".into()))?,
    };
    let row = FamilyRow::standard(r, n, q);
    let elems = row.elements().map_err(|e| CliError::Usage(format!("invalid degree {q}: {e}")))?;
    let classification = classify_boundary(&mesh, DEFAULT_COLLINEARITY_TOL);
    let counts = boundary_counts(&classification, &mesh);
    let rule = FrameRule::default();

    #[derive(Serialize)]
    struct BcRow {
        k: usize,
        family: Family,
        degree: i32,
        full_dim: usize,
        homogeneous_dim: usize,
        rule_dim: Option<usize>,
    }
    let mut rows = Vec::new();
    for elem in &elems {
        let space = derham::complex::assemble_element(&mesh, elem, &rule, false)?;
        let h = restrict_homogeneous(&mesh, &space, &classification)?;
        rows.push(BcRow {
            k: elem.k,
            family: elem.family,
            degree: elem.degree,
            full_dim: h.full_dim,
            homogeneous_dim: h.dim,
            rule_dim: h.rule_dim,
        });
    }
    let alternating: i64 =
        rows.iter().map(|r| if r.k % 2 == 0 { r.homogeneous_dim as i64 } else { -(r.homogeneous_dim as i64) }).sum();
    let pass = rows.iter().all(|r| r.rule_dim.map_or(true, |d| d == r.homogeneous_dim));

    let mut table = Table::new(vec![
        "k", "family", "degree", "full_dim", "homogeneous_dim", "rule_dim", "v0", "v0s", "e0", "alternating_sum",
    ]);
    for r in &rows {
        table.push(vec![
            r.k.to_string(),
            r.family.to_string(),
            r.degree.to_string(),
            r.full_dim.to_string(),
            r.homogeneous_dim.to_string(),
            opt(r.rule_dim),
            counts.v0.to_string(),
            counts.v0s.to_string(),
            counts.e0.to_string(),
            alternating.to_string(),
        ]);
    }
    let json = json!({
        "row": row,
        "v0": counts.v0,
        "v0s": counts.v0s,
        "e0": counts.e0,
        "spaces": rows,
        "alternating_sum": alternating,
        "pass": pass,
    });
    emit(c.format, out_path(c), &table, &json)?;
    Ok(outcome(pass))
}

pub fn bgg(c: &Common) -> CliResult<Outcome> {
    let mesh = load_mesh(c.mesh.as_deref(), c.dim)?;
    if mesh.dim() != 2 {
        return usage("bgg needs a 2D mesh");
    }
    let p = c.p.unwrap_or(1);
    if p < 1 {
        return usage(format!("bgg needs --p >= 1, got {p}"));
    }
    let tol = c.tol.unwrap_or(IDENTITY_TOL);
    let report = bgg_report(&mesh, p)?;
    let pass = report.pass_with(tol);

    let mut table = Table::new(vec!["key", "value"]);
    let mut kv = |k: &str, v: String| table.push(vec![k.to_string(), v]);
    kv("p", p.to_string());
    kv("identity_residual", sci(report.identity_residual));
    kv("s0_shape", format!("{}x{}", report.s0_shape.0, report.s0_shape.1));
    kv("s0_rank", report.s0_rank.to_string());
    kv("s1_shape", format!("{}x{}", report.s1_shape.0, report.s1_shape.1));
    kv("s1_rank", report.s1_rank.to_string());
    let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    kv("xi_dims", report.xi.dims.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
    kv("xi_betti", join(&report.xi.betti));
    kv("xi_expected_betti", join(&report.xi.expected_betti));
    kv("xi_exact", report.xi.pass().to_string());
    kv("a1a0_residual", sci(report.a1a0_residual));
    kv("gamma_residual", sci(report.gamma.max()));
    if let Some(hz) = &report.hu_zhang_row {
        kv("hz_sigma_dim", hz.sigma_dim.to_string());
        kv("hz_exact", hz.exactness.pass().to_string());
        kv("hz_symmetrization_residual", sci(hz.symmetrization_residual));
        kv("hz_first_square", sci(hz.first_square));
        kv("hz_second_square", sci(hz.second_square));
    }
    for s in &report.stress_counts {
        kv(&format!("stress_p{}_interior_skew", s.p), format!("{} {}", s.interior_skew, s.skew_formula));
        kv(&format!("stress_p{}_interior_symmetric", s.p), format!("{} {}", s.interior_symmetric, s.symmetric_formula));
    }
    kv("pass", pass.to_string());
    let json = json!({ "tol": tol, "pass": pass, "report": report });
    emit(c.format, out_path(c), &table, &json)?;
    Ok(outcome(pass))
}

pub fn compare(c: &Common) -> CliResult<Outcome> {
    let mesh = match (&c.grid, &c.mesh) {
        (Some(g), None) => {
            let g = parse_grid(g)?;
            generators::fourteen_tet_grid(g[0], g[1], g[2])
        }
        (None, Some(_)) => load_mesh(c.mesh.as_deref(), c.dim)?,
        (None, None) => generators::fourteen_tet_grid(2, 2, 2),
        (Some(_), Some(_)) => return usage("--grid and --mesh are exclusive"),
    };
    if mesh.dim() != 3 {
        return usage("compare needs a 3D mesh");
    }
    let ps = degrees(c.p, c.p_range.as_deref())?.unwrap_or_else(|| vec![4]);
    let mut all = Vec::new();
    let mut table = Table::new(vec![
        "p", "V", "E", "F", "T", "dim_nedelec", "nedelec_formula", "dim_new", "new_formula", "difference",
        "per_t_nedelec", "per_t_new", "per_t_difference", "edge_vertex_ratio",
    ]);
    for p in ps {
        let s = dof_savings(p, &mesh)?;
        table.push(vec![
            p.to_string(),
            s.counts.v.to_string(),
            s.counts.e.to_string(),
            s.counts.f.to_string(),
            s.counts.t.to_string(),
            s.dim_nedelec.to_string(),
            s.nedelec_formula.to_string(),
            s.dim_new.to_string(),
            s.new_formula.to_string(),
            s.difference.to_string(),
            s.per_t_nedelec.to_string(),
            s.per_t_new.to_string(),
            s.per_t_difference.to_string(),
            format!("{:.4}", s.edge_vertex_ratio),
        ]);
        all.push(s);
    }
    let pass = all
        .iter()
        .all(|s| s.dim_nedelec as i64 == s.nedelec_formula && s.dim_new as i64 == s.new_formula);
    emit(c.format, out_path(c), &table, &all)?;
    Ok(outcome(pass))
}

pub fn export(c: &Common) -> CliResult<Outcome> {
    let dir = c.out.as_deref().ok_or_else(|| CliError::Usage("export needs --out DIR".into()))?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", dir.display())))?;
    let write = |name: &str, text: &str| -> CliResult<()> {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
    };
    let mut table = Table::new(vec!["file", "description"]);
    if c.k.is_some() {
        let elem = element_def(c)?;
        let simplex = Simplex::reference(elem.n);
        let basis = dual_basis(&elem, &simplex)?;
        write("element.txt", &elem.catalog())?;
        table.push(vec!["element.txt".into(), "DoF catalog".into()]);
        for (j, f) in basis.members().iter().enumerate() {
            let name = format!("basis_{j:04}.txt");
            write(&name, &f.to_text())?;
            table.push(vec![name, format!("{:?}", basis.classes[j])]);
        }
    } else {
        let mesh = load_mesh(c.mesh.as_deref(), c.dim)?;
        let n = mesh.dim();
        let r = family_r(parse_family(c.r.as_deref())?)?;
        let q = match c.p {
            Some(q) => q,
            None => minimal_row_degree(|q| FamilyRow::standard(r, n, q))
                .ok_or_else(|| CliError::Usage("no valid degree for this row".into()))?,
        };
        let row = FamilyRow::standard(r, n, q);
        let spaces = row.assemble(&mesh, &FrameRule::default())?;
        for (k, op) in row_operators(&spaces)?.iter().enumerate() {
            let name = format!("d{k}.coo");
            write(&name, &op.to_coo_text())?;
            table.push(vec![name, format!("{} -> {}", spaces[k].label(), spaces[k + 1].label())]);
        }
    }
    let listing: Vec<BTreeMap<&str, String>> = table
        .rows
        .iter()
        .map(|r| BTreeMap::from([("file", r[0].clone()), ("description", r[1].clone())]))
        .collect();
    let manifest = serde_json::to_string_pretty(&listing).map_err(|e| CliError::Usage(e.to_string()))?;
    write("manifest.json", &manifest)?;
    emit(c.format, None, &table, &listing)?;
    Ok(Outcome::Pass)
}
