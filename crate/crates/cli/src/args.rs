use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "tensornorm", version, about = "Positive symmetric tensor norms, polarization constants and signed de Finetti representations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Pricing tolerance of the column-generation solver.
    #[arg(long, global = true, default_value_t = 1e-7)]
    pub tol: f64,
    /// Round limit of the column-generation solver.
    #[arg(long, global = true, env = "TENSORNORM_MAX_ITERS", default_value_t = 200)]
    pub max_iters: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, value_enum, default_value_t = Arithmetic::Float)]
    pub arithmetic: Arithmetic,
    /// Seed for randomized search starts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Read JSON input from this file instead of standard input.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the result to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arithmetic {
    Float,
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    L1,
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    Pi,
    Pip,
    Pis,
    Pisp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Lp,
    Constructive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ball {
    Pi,
    Pisp,
    Pip,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form psi(a, b) for the n-th power over l1^2.
    Psi {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Optimal decomposition of (a, b)^n into powers of probability vectors.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Certified bracket for kappa(n) with its witness and dual certificate.
    Kappa {
        #[arg(long)]
        n: usize,
    },
    /// Polarization constants of l1^n, or the l2^2 gallery constants.
    Constants {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Space::L1)]
        space: Space,
        /// Sampling resolution of the l2 verification.
        #[arg(long, default_value_t = 24)]
        resolution: usize,
    },
    /// Signed mixture of i.i.d. laws for an exchangeable distribution.
    Represent {
        #[arg(long, value_enum, default_value_t = Method::Lp)]
        method: Method,
    },
    /// Law of n draws without replacement from N states.
    Chi {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: usize,
    },
    /// Extendibility bounds over a range of N, e.g. `--N 2..8`.
    ExtendBounds {
        #[arg(long)]
        n: usize,
        #[arg(long = "N")]
        big_n: String,
        #[arg(long)]
        m: Option<usize>,
        /// Also solve the LP for the exact constant on small instances.
        #[arg(long)]
        exact: bool,
    },
    /// Two-dimensional Euclidean gallery.
    Euclid2 {
        #[command(subcommand)]
        which: Euclid2Command,
    },
    /// One norm of a symmetric tensor read as JSON.
    Norm {
        #[arg(long, value_enum)]
        kind: NormKind,
        #[arg(long, value_enum, default_value_t = Space::L1)]
        space: Space,
    },
}

#[derive(Debug, Subcommand)]
pub enum Euclid2Command {
    /// Closed-form and LP norms of [[a, b], [b, a]].
    Ab {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
    },
    /// Norms of the symmetric matrix with entries `a00,a01,a11`.
    Matrix {
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        entries: Vec<f64>,
    },
    /// Extreme points of a unit ball in (u, v, w) coordinates.
    Points {
        #[arg(long, value_enum)]
        kind: Ball,
        #[arg(long, default_value_t = 64)]
        resolution: usize,
    },
    /// The four constants with their sampled verification.
    Constants {
        #[arg(long, default_value_t = 24)]
        resolution: usize,
    },
}
