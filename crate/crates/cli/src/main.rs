//! `potts-landscape`: export slices, surfaces, censuses, critical
//! temperatures, Maxwell sets and free-energy grids.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potts_core::Error;

#[derive(Parser, Debug)]
#[command(name = "potts-landscape", version, about = "Phase diagrams of the three-state mean-field Potts model")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Free-energy tolerance for calling minima equally deep.
    #[arg(long, default_value_t = 1e-9, global = true)]
    pub tol: f64,
    /// Density of the barycentric seed lattice for stationary-point search.
    #[arg(long = "seed-grid", default_value_t = 64, global = true)]
    pub seed_grid: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
    /// Triangulated mesh; `surface` only.
    Obj,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coords {
    Pq,
    Uv,
    Xy,
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// A-priori measure as three comma-separated components summing to 1.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["uv", "pq"])]
    pub alpha: Option<Vec<f64>>,
    /// Field as log-ratios u = log(α1/α3), v = log(α2/α3).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "pq")]
    pub uv: Option<Vec<f64>>,
    /// Field in the symmetric coordinates p = √3 log(α1/α2), q = log(α1α2/α3²).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pq: Option<Vec<f64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Constant-β slice of the bifurcation set.
    Slice {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Samples per interval of the branch parameter.
        #[arg(long, default_value_t = 400)]
        samples: usize,
        /// Label the cells of the slice with their minima counts.
        #[arg(long)]
        label_cells: bool,
        /// Plane used for SVG output and cell detection.
        #[arg(long, value_enum, default_value_t = Coords::Pq)]
        coords: Coords,
        /// Plot window as `xmin,xmax,ymin,ymax` in the chosen plane.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        extent: Option<Vec<f64>>,
    },
    /// Both sheets of the bifurcation surface.
    Surface {
        #[arg(long, default_value_t = 3.5)]
        beta_max: f64,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Stationary points and global minimizers at one parameter point.
    Census {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[command(flatten)]
        field: FieldArgs,
    },
    /// The five distinguished inverse temperatures.
    Critical,
    /// Coexistence segments, triple points and curves at one temperature.
    Maxwell {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        /// Arclength step of the curve continuation.
        #[arg(long, default_value_t = 1e-2)]
        step: f64,
        /// SVG window in the (p, q) plane as `xmin,xmax,ymin,ymax`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        extent: Option<Vec<f64>>,
    },
    /// Free energy on a grid over the spin triangle, with basins.
    Potential {
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[command(flatten)]
        field: FieldArgs,
        /// Lattice density of the grid.
        #[arg(long, default_value_t = 60)]
        grid: usize,
    },
}

/// Domain errors exit with 2, numerical failures with 3.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::Singular(_) => 2,
        Error::Numerical(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            if let Err(e) = emit(&cli.common, &out.body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            for line in &out.messages {
                eprintln!("{line}");
            }
            match out.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(3)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(common: &Common, body: &[u8]) -> std::io::Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, body),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body)?;
            stdout.flush()
        }
    }
}
