use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use conecd::measures::Preset;
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "conecd",
    version,
    about = "Curvature-dimension checks on discretized cones"
)]
pub struct Cli {
    /// JSON file with default values for the subcommand's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for trial batches (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a Euclidean or spherical cone grid.
    BuildCone(BuildConeArgs),
    /// Check the metric axioms of a space file or CSV distance matrix.
    Validate(ValidateArgs),
    /// Optimal coupling and W2 distance between two measures.
    Wasserstein(WassersteinArgs),
    /// Check CD(K,N) along geodesic plans on a cone grid.
    CdCheck(CdCheckArgs),
    /// Measure how much transport crosses the apex or poles.
    ApexScan(ApexScanArgs),
    /// Spectral gap of a spherical cone against the bound n+1.
    Spectral(SpectralArgs),
    /// Table of distortion coefficients.
    Coeffs(CoeffsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Euclidean,
    Spherical,
}

impl From<KindArg> for conecd::ConeKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Euclidean => conecd::ConeKind::Euclidean,
            KindArg::Spherical => conecd::ConeKind::Spherical,
        }
    }
}

/// Grid either loaded from `--grid` or built inline.
#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct GridArgs {
    /// Grid file written by build-cone.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// `circle:<count>` or a path to a space JSON file.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub cells: Option<usize>,
    /// Outer radius of a Euclidean grid.
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Measure exponent of an inline cone.
    #[arg(long = "cone-N")]
    #[serde(rename = "cone_N")]
    pub cone_n: Option<f64>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct BuildConeArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub cells: Option<usize>,
    #[arg(long)]
    pub rmax: Option<f64>,
    /// Measure exponent N of the cone.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidateArgs {
    /// Space JSON file.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// CSV distance matrix (unit weights).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct WassersteinArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Use a plain space file instead of a cone grid.
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub mu0: Option<PathBuf>,
    #[arg(long)]
    pub mu1: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct CdCheckArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long = "K", allow_hyphen_values = true)]
    #[serde(rename = "K")]
    pub k: Option<f64>,
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Interpolation times, comma separated.
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    /// Dimensions N' to test, comma separated (default N, N+1, 2N).
    #[arg(long = "nprime", value_delimiter = ',')]
    pub nprime: Option<Vec<f64>>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub plan_tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV summary path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct ApexScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub mu0: Option<PathBuf>,
    #[arg(long)]
    pub mu1: Option<PathBuf>,
    /// Interpolation time (presets choose their own by default).
    #[arg(long)]
    pub s: Option<f64>,
    /// Radius below which (or within which of pi) a point counts as a pole.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub plan_tol: Option<f64>,
    /// Number of generic pairs drawn.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct SpectralArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub grid: GridArgs,
    /// Dimension n of the base; the bound is n+1.
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long)]
    pub tol_rel: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct CoeffsArgs {
    #[arg(long = "K", value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(rename = "K")]
    pub k: Option<Vec<f64>>,
    #[arg(long = "N", value_delimiter = ',')]
    #[serde(rename = "N")]
    pub n: Option<Vec<f64>>,
    #[arg(long = "t", value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub theta: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}
