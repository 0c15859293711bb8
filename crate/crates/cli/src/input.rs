//! Flag parsing beyond what clap validates, and mesh loading.

use std::fmt;
use std::path::Path;

use derham::elements::Family;
use derham::mesh::{generators, SimplicialMesh};

/// Error with its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input: exit 2.
    Usage(String),
    /// A check could not be carried out because the math failed: exit 1.
    Verification(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Verification(m) => f.write_str(m),
        }
    }
}

impl From<derham::Error> for CliError {
    fn from(e: derham::Error) -> Self {
        match e {
            derham::Error::Containment { .. } | derham::Error::Singular(_) => CliError::Verification(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

const BUILTINS: &str = "interval, chain:M, triangle, tet, square, square-midpoint, annulus, two-tets, three-tets, grid:NX,NY,NZ";

fn builtin(name: &str) -> CliResult<SimplicialMesh> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let number = |a: Option<&str>| -> CliResult<usize> {
        a.ok_or_else(|| CliError::Usage(format!("builtin mesh {base} needs a size")))?
            .parse()
            .map_err(|_| CliError::Usage(format!("bad size in builtin mesh {name}")))
    };
    Ok(match base {
        "interval" => generators::single_simplex(1),
        "chain" => generators::interval_chain(number(arg)?),
        "triangle" => generators::single_simplex(2),
        "tet" => generators::single_simplex(3),
        "square" => generators::two_triangle_square(),
        "square-midpoint" => generators::square_with_midpoint(),
        "annulus" => generators::annulus(),
        "two-tets" => generators::two_cells(3),
        "three-tets" => generators::three_cells(3),
        "grid" => {
            let g = parse_grid(arg.unwrap_or(""))?;
            generators::fourteen_tet_grid(g[0], g[1], g[2])
        }
        _ => return usage(format!("unknown builtin mesh {name}; available: {BUILTINS}")),
    })
}

/// Mesh from `--mesh`, or the reference simplex of `--dim`.
pub fn load_mesh(mesh: Option<&str>, dim: Option<usize>) -> CliResult<SimplicialMesh> {
    let m = match (mesh, dim) {
        (Some(arg), _) => match arg.strip_prefix("builtin:") {
            Some(name) => builtin(name)?,
            None => SimplicialMesh::read(Path::new(arg))
                .map_err(|e| CliError::Usage(format!("cannot read mesh {arg}: {e}")))?,
        },
        (None, Some(n)) if (1..=3).contains(&n) => generators::single_simplex(n),
        (None, Some(n)) => return usage(format!("--dim must be 1, 2 or 3, got {n}")),
        (None, None) => return usage("give --mesh or --dim"),
    };
    if let Some(n) = dim {
        if n != m.dim() {
            return usage(format!("--dim {n} does not match the {}D mesh", m.dim()));
        }
    }
    Ok(m)
}

pub fn parse_family(r: Option<&str>) -> CliResult<Family> {
    let r = r.ok_or_else(|| CliError::Usage("--r is required".into()))?;
    r.parse().map_err(|_| CliError::Usage(format!("unknown family {r}")))
}

pub fn parse_grid(text: &str) -> CliResult<[usize; 3]> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad grid {text}; expected NX,NY,NZ")))?;
    match parts.as_slice() {
        [a, b, c] if *a > 0 && *b > 0 && *c > 0 => Ok([*a, *b, *c]),
        _ => usage(format!("bad grid {text}; expected three positive sizes")),
    }
}

pub fn parse_betti(text: &str) -> CliResult<Vec<i64>> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("bad --betti {text}; expected comma-separated integers")))
}

/// Degrees from `--p` or `--p-range A:B`.
pub fn degrees(p: Option<i32>, range: Option<&str>) -> CliResult<Option<Vec<i32>>> {
    match (p, range) {
        (Some(p), None) => Ok(Some(vec![p])),
        (None, Some(r)) => {
            let (a, b) = r.split_once(':').ok_or_else(|| CliError::Usage(format!("bad --p-range {r}; expected A:B")))?;
            let a: i32 = a.trim().parse().map_err(|_| CliError::Usage(format!("bad --p-range {r}")))?;
            let b: i32 = b.trim().parse().map_err(|_| CliError::Usage(format!("bad --p-range {r}")))?;
            if a > b || a < 0 {
                return usage(format!("invalid --p-range {r}: need 0 <= A <= B"));
            }
            Ok(Some((a..=b).collect()))
        }
        (None, None) => Ok(None),
        (Some(_), Some(_)) => usage("--p and --p-range are exclusive"),
    }
}
