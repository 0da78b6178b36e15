use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tribilliard_core::enumeration::PrecisionConfig;
use tribilliard_core::measure::DEFAULT_R;
use tribilliard_core::{AngleSpec, TriangleShape, Vertex};

use crate::error::CliError;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Debug, Parser)]
#[command(
    name = "tribilliard",
    version,
    about = "Triangle-billiard complexity experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Debug, Args, Serialize)]
pub struct RunConfig {
    /// Angle at vertex A, in radians or as a multiple of pi ("1/3pi", "pi/5").
    #[arg(
        long,
        global = true,
        default_value = "1/3pi",
        allow_hyphen_values = true
    )]
    pub alpha: AngleSpec,
    /// Angle at vertex B.
    #[arg(
        long,
        global = true,
        default_value = "1/3pi",
        allow_hyphen_values = true
    )]
    pub beta: AngleSpec,
    /// Admissibility margin.
    #[arg(
        long,
        global = true,
        default_value_t = 0.01,
        allow_hyphen_values = true
    )]
    pub delta: f64,
    /// Largest discrete length enumerated.
    #[arg(long, global = true, default_value_t = 12)]
    pub n_max: usize,
    /// Vertex-hit tolerance per unit of corridor depth.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub hit_tolerance: f64,
    /// Upper edge of the band re-tested at extended precision.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub safe_tolerance: f64,
    /// Skip the 128-bit re-test of borderline vertex hits.
    #[arg(long, global = true)]
    pub no_extended: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Cache and artifact directory.
    #[arg(
        long,
        global = true,
        env = "TRIBILLIARD_CACHE",
        default_value = ".tribilliard"
    )]
    #[serde(skip)]
    pub cache_dir: PathBuf,
    /// What to print on stdout; the JSON artifact is always written.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    #[serde(skip)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn shape(&self) -> Result<TriangleShape, CliError> {
        Ok(TriangleShape::new(self.alpha, self.beta, self.delta)?)
    }

    pub fn precision(&self) -> PrecisionConfig {
        PrecisionConfig {
            hit_tolerance: self.hit_tolerance,
            safe_tolerance: self.safe_tolerance,
            extended: !self.no_extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceArg {
    All,
    DiagonalEndpoints,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainArg {
    Full,
    Admissible,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Enumerate generalized diagonals and the complexity table.
    Enumerate {
        /// Restrict to one start vertex.
        #[arg(long)]
        vertex: Option<Vertex>,
    },
    /// Build the indexed partition of one vertex sector and audit it.
    Partitions {
        #[arg(long, default_value = "A")]
        vertex: Vertex,
    },
    /// List good-position triples, with area certificates.
    GoodTriples {
        #[arg(long, default_value = "A")]
        vertex: Vertex,
        /// Smallest index considered.
        #[arg(long, default_value_t = 1)]
        lo: usize,
        /// Largest index considered (default: --n-max).
        #[arg(long)]
        hi: Option<usize>,
        /// Also search levels n+1..=n+c for a certified close triple.
        #[arg(long)]
        close_n: Option<usize>,
        #[arg(long, default_value_t = 4)]
        close_c: usize,
    },
    /// Check symbolic unfoldings against degree bounds and numeric frames.
    SymbolicCheck {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Longest combinatorics drawn, in moves.
        #[arg(long, default_value_t = 11)]
        max_moves: usize,
        /// Random admissible angle pairs per combinatorics.
        #[arg(long, default_value_t = 5)]
        angle_pairs: usize,
    },
    /// Area polynomial of three unfolded points, or a random family summary.
    AreaPoly {
        /// Point as MOVES:VERTEX, e.g. "A+,B-:upper"; give exactly three.
        #[arg(long = "point")]
        points: Vec<String>,
        /// Kites per unfolding in family mode.
        #[arg(long, default_value_t = 3)]
        kites: usize,
        /// Random triples drawn in family mode.
        #[arg(long, default_value_t = 200)]
        count: usize,
    },
    /// Worst-case sublevel fractions of area-polynomial families by degree.
    MeasureDecay {
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16])]
        degrees: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_R)]
        r: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 50)]
        family_size: usize,
        /// Reference decay rate for the e^{-cm} column.
        #[arg(long, default_value_t = 0.1)]
        c_ref: f64,
        #[arg(long, value_enum, default_value_t = ChoiceArg::All)]
        vertex_choice: ChoiceArg,
        #[arg(long, value_enum, default_value_t = DomainArg::Full)]
        domain: DomainArg,
        #[arg(long)]
        stratified: bool,
    },
    /// The threshold exponent sqrt(3) - 1 and feasible constants.
    Constants {
        #[arg(long)]
        mu: Option<f64>,
        /// With --mu, check this epsilon instead of constructing one.
        #[arg(long, requires = "mu")]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 1.0, requires = "epsilon")]
        gamma: f64,
    },
    /// Growth fit, gap sequence and bound comparison for a measured table.
    Report {
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long, default_value_t = 10)]
        fit_lo: usize,
        #[arg(long)]
        fit_hi: Option<usize>,
        /// Use this vertex's directed table instead of the global one.
        #[arg(long)]
        vertex: Option<Vertex>,
    },
    /// Exhaustively check the good-triple threshold for small step counts.
    VerifyLemma21 {
        /// Single step count (default: 1, 2 and 3).
        #[arg(long)]
        c: Option<usize>,
    },
}

impl Command {
    pub fn kind(&self) -> &'static str {
        match self {
            Command::Enumerate { .. } => "enumerate",
            Command::Partitions { .. } => "partitions",
            Command::GoodTriples { .. } => "good-triples",
            Command::SymbolicCheck { .. } => "symbolic-check",
            Command::AreaPoly { .. } => "area-poly",
            Command::MeasureDecay { .. } => "measure-decay",
            Command::Constants { .. } => "constants",
            Command::Report { .. } => "report",
            Command::VerifyLemma21 { .. } => "verify-lemma21",
        }
    }
}
