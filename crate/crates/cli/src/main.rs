//! `carathlab`: lemma sweeps, distance brackets and glued-space probes.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "carathlab", version, about = "Certified Caratheodory distance brackets on annuli and glued annuli")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Outer radius R > 1 of the annulus; repeat for several.
    #[arg(long = "R", global = true, value_name = "REAL")]
    pub outer_radii: Vec<f64>,
    /// Truncation N of the glued space.
    #[arg(long = "N", global = true, default_value_t = 12, value_name = "INT")]
    pub truncation: u32,
    /// Last m of the lemma sweeps.
    #[arg(long, global = true, default_value_t = 1_000_000, value_name = "INT")]
    pub m_max: u64,
    /// Last n of the product sweeps.
    #[arg(long, global = true, default_value_t = 20, value_name = "INT")]
    pub n_max: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for the order in which optimizer starting points are tried.
    #[arg(long, global = true, default_value_t = 0, value_name = "INT")]
    pub seed: u64,
    /// Largest number of Blaschke factors in the lower-bound family.
    #[arg(long, global = true, default_value_t = 4, value_name = "INT")]
    pub family_degree: usize,
    /// Family degree used for the 2ⁿ lower bounds of each row of the
    /// product chain.
    #[arg(long, global = true, default_value_t = 1, value_name = "INT")]
    pub chain_degree: usize,
    /// Deck indices searched when enumerating lifts.
    #[arg(long, global = true, default_value_t = 50, value_name = "INT")]
    pub lift_range: usize,
    /// Record wall-clock seconds per section in the report.
    #[arg(long, global = true)]
    pub timings: bool,
}

impl RunConfig {
    pub fn radii(&self) -> Vec<f64> {
        if self.outer_radii.is_empty() {
            vec![4.0]
        } else {
            self.outer_radii.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every lemma sweep for each R.
    VerifyLemmas,
    /// Bracket the Möbius distance between two annulus points `re,im`.
    AnnulusDistance {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Queries on the truncated glued space X_N(R).
    #[command(subcommand)]
    Glued(GluedCommand),
}

#[derive(Debug, Subcommand)]
pub enum GluedCommand {
    /// Bracket the distance between two points `sheet:re,im` or `glue:n,m`.
    Distance {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// Points [√R, n] inside the 2/e ball around [√R, 0].
    Noncompact,
    /// Cauchy moduli of a sequence of points.
    Complete {
        #[arg(required = true, num_args = 3.., allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Dyadic radius of a ball around a point that stays in an annular band.
    Ball {
        #[arg(allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        inner: f64,
        #[arg(long)]
        outer: f64,
        /// Comma-separated sheets of the region; all sheets if omitted.
        #[arg(long, value_delimiter = ',')]
        sheets: Vec<u32>,
        /// Points per boundary circle.
        #[arg(long, default_value_t = 16)]
        samples: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
