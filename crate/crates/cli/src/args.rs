//! Command-line grammar.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "hrtlab",
    version,
    about = "Numerical experiments on finite Gabor systems"
)]
pub struct Cli {
    /// Directory for outputs and the run manifest.
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,

    /// JSON object whose keys mirror flags; flags given on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed recorded in the manifest for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Classify a configuration of time-frequency points.
    Classify(PointsArgs),
    /// Map a configuration by an affine symplectic map to a normal form.
    Normalize(PointsArgs),
    /// Check the operator identities of the discrete Zak transform.
    ZakCheck(ZakCheckArgs),
    /// Torus rotation orbit, discrepancy and recurrence.
    Orbit(OrbitArgs),
    /// Log-domain orbit product (torus) or product trace (flow).
    Product(ProductArgs),
    /// Toral line and the variation of |p| along it.
    Line(LineArgs),
    /// Rational relations among real numbers.
    Relations(RelationsArgs),
    /// Independence margins over an (alpha, beta) grid.
    Independence(IndependenceArgs),
    /// Product trace, classifier and summability probe of a diagonal flow.
    Flow(FlowArgs),
    /// Re-run the command recorded in a manifest.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Normalize(_) => "normalize",
            Command::ZakCheck(_) => "zak-check",
            Command::Orbit(_) => "orbit",
            Command::Product(_) => "product",
            Command::Line(_) => "line",
            Command::Relations(_) => "relations",
            Command::Independence(_) => "independence",
            Command::Flow(_) => "flow",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PointsArgs {
    /// JSON list of [x, y] pairs; entries may be numbers or exact strings like "sqrt(2)/3".
    #[arg(long, required_unless_present = "input", conflicts_with = "input")]
    pub points: Option<String>,
    /// JSON file with {"points": [...], "distinguished": i}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// 0-based index of the distinguished point.
    #[arg(long)]
    pub distinguished: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct WindowArgs {
    /// gaussian, box, two-sided-exponential or hermite-N.
    #[arg(long, default_value = "gaussian")]
    pub window: String,
    /// Sampling step; must be 1/q for an integer q.
    #[arg(long)]
    pub h: Option<String>,
    /// Half-support: samples cover [-K, K).
    #[arg(long = "K", default_value_t = 8)]
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ZakCheckArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    /// Zak grid size; the window step defaults to 1/q.
    #[arg(long, default_value_t = 64)]
    pub q: usize,
    /// Modulation of the mixed identity.
    #[arg(long, default_value = "1/4", allow_hyphen_values = true)]
    pub alpha: String,
    /// Translation of the mixed identity.
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    pub beta: String,
    /// Also write the Zak image as CSV and a PGM of its modulus.
    #[arg(long)]
    pub image: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OrbitArgs {
    /// Rotation vector "g1,g2".
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    /// Starting point "t,omega".
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 50)]
    pub grid_res: usize,
    /// Recurrence radius.
    #[arg(long, default_value_t = 0.01)]
    pub eps: f64,
    /// Recurrence search bound; defaults to n.
    #[arg(long)]
    pub max_n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ProductArgs {
    /// Torus polynomial as JSON [[c, y, x], ...]; c is a number or [re, im].
    #[arg(long, conflicts_with_all = ["xs", "cs", "xi"], required_unless_present = "xs")]
    pub p: Option<String>,
    /// Rotation vector "g1,g2" (torus mode).
    #[arg(long, requires = "p", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Starting point "t,omega" (torus mode).
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub z: String,
    /// Flow translations "x1,x2,..." (flow mode).
    #[arg(long, requires = "cs", allow_hyphen_values = true)]
    pub xs: Option<String>,
    /// Flow coefficients "c1,c2,...".
    #[arg(long, requires = "xs", allow_hyphen_values = true)]
    pub cs: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-14)]
    pub zero_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LineArgs {
    /// Anchor "t,omega".
    #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
    pub lambda: String,
    /// Direction "g1,g2".
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, default_value_t = 100)]
    pub max_segments: usize,
    /// Polynomial to sample along the line, JSON [[c, y, x], ...].
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RelationsArgs {
    /// JSON list of values or a comma-separated list; "sqrt(2)" style entries are exact.
    #[arg(long, allow_hyphen_values = true)]
    pub values: String,
    #[arg(long, default_value_t = 64)]
    pub max_den: i64,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct IndependenceArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    /// Base configuration, JSON list of [x, y] pairs.
    #[arg(long)]
    pub base: String,
    /// Modulation range start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// Translation range start:stop:step.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FlowArgs {
    /// Translations "x1,x2,...".
    #[arg(long, allow_hyphen_values = true)]
    pub xs: String,
    /// Coefficients "c1,c2,...".
    #[arg(long, allow_hyphen_values = true)]
    pub cs: String,
    #[arg(long, default_value = "0.3", allow_hyphen_values = true)]
    pub xi: String,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// |F(xi)| used to seed the summability sums.
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Also report the Fourier-side residual for this window.
    #[arg(long)]
    pub fourier_window: Option<String>,
    /// Step of the Fourier window.
    #[arg(long, default_value = "1/16")]
    pub fourier_h: String,
    /// Half-support of the Fourier window.
    #[arg(long, default_value_t = 4)]
    pub fourier_k: usize,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// Manifest written by an earlier run.
    pub manifest: PathBuf,
}
