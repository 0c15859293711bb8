//! `derham`: family tables and verification reports for nodal de Rham
//! finite element families.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on usage or I/O errors.

mod commands;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "derham", version, about = "Dimension tables and exactness checks for nodal de Rham families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Local and global dimensions of every (r, k) space.
    Tables(Common),
    /// Rank-nullity exactness of one family row on a mesh.
    Verify(Common),
    /// Unisolvence and DoF layout of one element.
    Element(Common),
    /// Dimensions with homogeneous boundary conditions.
    Bc(Common),
    /// 2D BGG diagram, Ξ complex and Hu-Zhang stress row.
    Bgg(Common),
    /// Nédélec vs r=2 H(curl) DoF counts on a 3D grid.
    Compare(Common),
    /// Write dual basis polynomials or operator matrices to a directory.
    Export(Common),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Flags shared by every command; each command reads the ones it needs.
#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Mesh file (JSON) or a built-in mesh such as `builtin:square`.
    #[arg(long)]
    pub mesh: Option<String>,
    /// Spatial dimension when no mesh is given.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Family: 0, 1, 2, hz, trimmed, vlagrange or vhermite.
    #[arg(long)]
    pub r: Option<String>,
    /// Form degree.
    #[arg(long)]
    pub k: Option<usize>,
    /// Polynomial degree.
    #[arg(long, conflicts_with = "p_range")]
    pub p: Option<i32>,
    /// Inclusive degree range A:B.
    #[arg(long)]
    pub p_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (or directory for `export`); stdout when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Pass threshold for the command's residual check.
    #[arg(long, env = "DERHAM_TOL")]
    pub tol: Option<f64>,
    /// Expected Betti numbers, comma separated.
    #[arg(long)]
    pub betti: Option<String>,
    /// Use the mixed 3D sequence in `verify`.
    #[arg(long)]
    pub mixed: bool,
    /// Grid size nx,ny,nz for `compare`.
    #[arg(long)]
    pub grid: Option<String>,
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Tables(c) => commands::tables(&c),
        Command::Verify(c) => commands::verify(&c),
        Command::Element(c) => commands::element(&c),
        Command::Bc(c) => commands::bc(&c),
        Command::Bgg(c) => commands::bgg(&c),
        Command::Compare(c) => commands::compare(&c),
        Command::Export(c) => commands::export(&c),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
