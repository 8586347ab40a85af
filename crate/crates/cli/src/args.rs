use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "weightlab", version, about = "Finite-horizon analysis of weight functions and weight matrices")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// JSON file whose keys stand in for flags; explicit flags still win
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Output formats, comma separated
    #[arg(long, global = true, value_delimiter = ',', default_value = "json")]
    pub emit: Vec<Format>,

    /// Report path; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Directory for one CSV per sampled curve
    #[arg(long, global = true)]
    pub plot_dir: Option<PathBuf>,

    /// Exit with 2 when any verdict fails
    #[arg(long, global = true)]
    pub expect: Option<Expect>,

    /// Exit with 3 when any verdict is inconclusive
    #[arg(long, global = true)]
    pub strict: bool,

    /// Echoed into the report; the batteries themselves are deterministic
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (0 lets rayon decide)
    #[arg(long, global = true, env = "WEIGHTLAB_THREADS")]
    pub threads: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expect {
    Holds,
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Largest t of the sample grid
    #[arg(long)]
    pub horizon: Option<f64>,

    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check growth conditions of one weight
    Analyze {
        #[arg(long)]
        weight: String,
        /// Condition names, comma separated (all when absent)
        #[arg(long, value_delimiter = ',')]
        conditions: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Evaluate every condition and the weight classes built from them
    Classify {
        #[arg(long)]
        weight: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Young conjugate on [0, xmax], optionally with the biconjugate gap
    Conjugate {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 1e4)]
        xmax: f64,
        #[arg(long, default_value_t = 2001)]
        xpoints: usize,
        #[arg(long)]
        biconjugate: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Associated weight matrix `log W^(l)_j`
    Matrix {
        #[arg(long)]
        weight: String,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        ell: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        jmax: usize,
    },
    /// Growth index scan and bisection
    Index {
        #[arg(long)]
        weight: String,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1,1.5,2,3,5,8")]
        gammas: Vec<f64>,
        /// Dilation factors K (library defaults when absent)
        #[arg(long, value_delimiter = ',')]
        ks: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// kappa at a few points and its equivalence with the weight
    Kappa {
        #[arg(long)]
        weight: String,
        #[arg(long, value_delimiter = ',', default_value = "1,10,100,1000")]
        y: Vec<f64>,
        /// Upper end of the y grid for the equivalence check
        #[arg(long, default_value_t = 1e6)]
        y_max: f64,
        #[arg(long, default_value_t = 1e8)]
        horizon: f64,
    },
    /// Relations between two weights
    Compare {
        #[arg(long)]
        sigma: String,
        #[arg(long)]
        tau: String,
        #[arg(long, value_delimiter = ',', default_value = "le,preceq,sim,triangle,preceq_c,sim_c,triangle_c")]
        rel: Vec<String>,
        /// Also run the ω-to-matrix bridge consistency check
        #[arg(long)]
        bridge: bool,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Relations between two weight matrices
    MatrixCompare {
        #[arg(long, default_value = "exp")]
        s_type: MatrixType,
        #[arg(long)]
        s_weight: String,
        #[arg(long, default_value = "exp")]
        t_type: MatrixType,
        #[arg(long)]
        t_weight: String,
        #[arg(long, value_delimiter = ',', default_value = "beurling,roumieu")]
        rel: Vec<String>,
        /// Matrix indices (library defaults when absent)
        #[arg(long, value_delimiter = ',')]
        ells: Vec<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Weighted L^p inclusion experiment
    LpExperiment {
        /// Matrix spec: {"type": "exp"|"dil", "weight": ...} or a bare weight
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        #[arg(long, default_value = "2")]
        p: String,
        #[arg(long = "type", default_value = "roumieu")]
        space: String,
        #[arg(long, value_delimiter = ',')]
        ells: Vec<f64>,
        /// Radial horizon of the test functions
        #[arg(long, default_value_t = 1e4)]
        t_max: f64,
        #[arg(long, default_value_t = 40_001)]
        t_points: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Build and certify the non-convex slowly varying profile
    Counterexample {
        #[arg(long = "J", alias = "j-max", default_value_t = 60)]
        j_max: usize,
        #[arg(long, default_value_t = 0.5)]
        t1: f64,
        /// `default`, `power:ALPHA`, a JSON array of values or a path to one
        #[arg(long, default_value = "default")]
        delta: String,
        /// all, invariants, nonconvexity, slow, nonequivalence, cross or none
        #[arg(long, value_delimiter = ',', default_value = "all")]
        certify: Vec<String>,
        #[arg(long, default_value_t = 1024.0)]
        a_max: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5")]
        gammas: Vec<f64>,
        /// Exponent of the comparison sequence
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 10)]
        gap_blocks: usize,
        /// Write the profile as a weight JSON document
        #[arg(long)]
        export_profile: Option<PathBuf>,
    },
    /// Conditions, classes, index, conjugate and kappa of one weight in one document
    Report {
        #[arg(long)]
        weight: String,
        #[arg(long, default_value_t = 1e4)]
        xmax: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixType {
    Exp,
    Dil,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Classify { .. } => "classify",
            Command::Conjugate { .. } => "conjugate",
            Command::Matrix { .. } => "matrix",
            Command::Index { .. } => "index",
            Command::Kappa { .. } => "kappa",
            Command::Compare { .. } => "compare",
            Command::MatrixCompare { .. } => "matrix-compare",
            Command::LpExperiment { .. } => "lp-experiment",
            Command::Counterexample { .. } => "counterexample",
            Command::Report { .. } => "report",
        }
    }
}
