use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use planarcode::lattice::Boundary;
use serde::{Deserialize, Serialize};

use crate::Failure;

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Plaquette,
    Star,
    Periodic,
}

impl BoundaryArg {
    pub fn to_boundary(self) -> Boundary {
        match self {
            BoundaryArg::Plaquette => Boundary::Plaquette,
            BoundaryArg::Star => Boundary::Star,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Equal,
    Geometric,
}

/// Settings read from `--config`; any explicit command-line flag wins.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub bc: Option<BoundaryArg>,
    pub je: Option<f64>,
    pub jm: Option<f64>,
    pub hx: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub partition_rect: Option<[usize; 4]>,
    pub partition_spins: Option<Vec<usize>>,
    pub family: Option<FamilyArg>,
    pub a: Option<f64>,
    pub phases: Option<Vec<(usize, f64)>>,
    pub boundary_length: Option<usize>,
    pub kpoints: Option<usize>,
    pub rmax: Option<usize>,
    pub order: Option<usize>,
    pub k: Option<usize>,
    pub tol: Option<f64>,
    pub sweep: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Flag value if given, else the config-file value, else the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
