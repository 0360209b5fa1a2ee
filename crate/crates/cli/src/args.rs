use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "sigrecon", version, about = "Signal reconstruction from random samples under Fourier priors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Prior as a JSON object or a path to a JSON file.
    #[arg(long, global = true, value_name = "FILE|JSON")]
    pub prior: Option<String>,
    /// Window length T in seconds.
    #[arg(long = "T", global = true, default_value_t = 1.0, value_name = "SECONDS")]
    pub t_end: f64,
    /// Regularization and accuracy parameter.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub epsilon: f64,
    /// Universal density parameter; implies `--alpha-source explicit`.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// How to choose alpha for the universal density.
    #[arg(long = "alpha-source", value_enum, global = true)]
    pub alpha_source: Option<AlphaSourceArg>,
    /// Number of samples; otherwise derived from `--c` and `--delta`.
    #[arg(long, global = true, conflicts_with_all = ["c", "delta"])]
    pub samples: Option<usize>,
    /// Sample-count constant.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Failure probability for the sample count.
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Grid size for operator discretizations and output grids.
    #[arg(long = "grid-n", global = true, default_value_t = 1024)]
    pub grid_n: usize,
    /// Input file.
    #[arg(long = "in", global = true, value_name = "FILE")]
    #[serde(skip)]
    pub input: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub plot: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSourceArg {
    AnalyticBound,
    NumericStatdim,
    Explicit,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityArg {
    /// Spectrum-blind density with parameter alpha.
    Universal,
    /// Density specific to bandlimited priors.
    Bandlimited,
    Uniform,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate the kernel k(dt) on [-dt-max, dt-max].
    Kernel {
        #[arg(long = "dt-max", default_value_t = 2.0)]
        dt_max: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Draw a sample set and write it as CSV with a JSON sidecar.
    Sample {
        #[arg(long, value_enum, default_value_t = DensityArg::Universal)]
        density: DensityArg,
    },
    /// Generate a unit-energy synthetic signal.
    Synth {
        #[arg(long, default_value_t = 8)]
        atoms: usize,
    },
    /// Sample a signal, fit the reconstruction and write the model.
    Fit {
        #[arg(long, value_enum, default_value_t = DensityArg::Universal)]
        density: DensityArg,
        /// Noise as a JSON object or a path to a JSON file.
        #[arg(long, value_name = "FILE|JSON")]
        noise: Option<String>,
    },
    /// Evaluate a persisted model on a uniform grid over [0, T].
    Eval,
    /// Statistical dimension and spectrum of the discretized operator.
    Statdim,
    /// Empirical ridge leverage scores on the grid.
    Leverage,
    /// Random combination of the top eigenfunctions.
    Hard,
    /// Error-versus-samples curves for the universal, uniform and sinc methods.
    Bench {
        /// Comma-separated sample counts.
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, value_name = "FILE|JSON")]
        noise: Option<String>,
    },
    /// Render a CSV file as an SVG line chart.
    Plot {
        #[arg(long = "log-y")]
        log_y: bool,
    },
}
