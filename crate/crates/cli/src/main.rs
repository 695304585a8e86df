mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::{BoundaryArg, FamilyArg, Format};

/// Toric-code reports on finite lattices: ground-space dimension,
/// entanglement entropy of cuts, boundary-band dispersion, effective
/// boundary couplings, and low-lying spectra.
#[derive(Parser)]
#[command(name = "planarcode", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ground-space dimension by GF(2) rank and, on small lattices, by
    /// spectrum clustering at zero field.
    Degeneracy(DegeneracyArgs),
    /// Entanglement entropy of one cut by every applicable method.
    Entropy(EntropyArgs),
    /// Boundary-band dispersion curves (closed form, infinite-ring limit,
    /// and pure cosine).
    Dispersion(DispersionArgs),
    /// Effective boundary couplings against the resolvent-walk oracle.
    Perturb(PerturbArgs),
    /// Lowest eigenvalues, degeneracy cluster, and an optional
    /// splitting-vs-field sweep.
    Spectrum(SpectrumArgs),
}

#[derive(Args)]
struct Common {
    /// Lattice rows.
    #[arg(long)]
    rows: Option<usize>,
    /// Lattice columns.
    #[arg(long)]
    cols: Option<usize>,
    /// Boundary condition.
    #[arg(long, value_enum)]
    bc: Option<BoundaryArg>,
    /// Star (vertex) coupling.
    #[arg(long)]
    je: Option<f64>,
    /// Plaquette coupling.
    #[arg(long)]
    jm: Option<f64>,
    /// Transverse field.
    #[arg(long)]
    hx: Option<f64>,
    /// JSON settings file; explicit flags override its entries.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format (csv applies to dispersion and spectrum tables).
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct DegeneracyArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    common: Common,
    /// Side A as the closed vertex rectangle "r0,c0,r1,c1".
    #[arg(long, value_name = "R0,C0,R1,C1", conflicts_with = "partition_spins")]
    partition_rect: Option<String>,
    /// Side A as comma-separated spin indices ("" for the empty side).
    #[arg(long, value_name = "I,J,...")]
    partition_spins: Option<String>,
    /// Ground-state coefficient family.
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Geometric family base, in (0, 1].
    #[arg(long)]
    a: Option<f64>,
    /// Per-weight phases for the geometric family, "w:phi,w:phi,...".
    #[arg(long, value_name = "W:PHI,...")]
    phases: Option<String>,
}

#[derive(Args)]
struct DispersionArgs {
    #[command(flatten)]
    common: Common,
    /// Boundary ring length (even, >= 4); defaults to the ring of the
    /// --rows x --cols rectangle.
    #[arg(long)]
    boundary_length: Option<usize>,
    /// Momentum grid size.
    #[arg(long)]
    kpoints: Option<usize>,
}

#[derive(Args)]
struct PerturbArgs {
    #[command(flatten)]
    common: Common,
    /// Largest hop range to tabulate.
    #[arg(long)]
    rmax: Option<usize>,
    /// Cap on the resolvent walk order (default: deep enough for every
    /// tabulated range).
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    /// How many of the lowest eigenvalues to compute.
    #[arg(long)]
    k: Option<usize>,
    /// Residual tolerance for eigenpair convergence.
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated field values; adds a ground-splitting sweep with a
    /// fitted log-log slope (json output only).
    #[arg(long, value_name = "H1,H2,...")]
    sweep: Option<String>,
}

/// A failed run: usage and input problems exit 1, cross-method
/// disagreements exit 2.
pub enum Failure {
    Usage(String),
    Inconsistent(String),
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn inconsistent(msg: impl Into<String>) -> Self {
        Failure::Inconsistent(msg.into())
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Inconsistent(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Inconsistent(m) => m,
        }
    }
}

impl From<planarcode::Error> for Failure {
    fn from(e: planarcode::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let ok = matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return ExitCode::from(if ok { 0 } else { 1 });
        }
    };
    let result = match &cli.command {
        Command::Degeneracy(args) => commands::degeneracy(args),
        Command::Entropy(args) => commands::entropy(args),
        Command::Dispersion(args) => commands::dispersion(args),
        Command::Perturb(args) => commands::perturb(args),
        Command::Spectrum(args) => commands::spectrum(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
