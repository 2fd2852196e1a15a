mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use report::Report;

#[derive(Parser, Debug)]
#[command(
    name = "coarse",
    version,
    about = "Coarse geometry of countable groups at desk scale"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Group descriptor, e.g. "Z^2 + Z_6", "Z_2^inf", "Q/Z", "UT3".
    #[arg(long, global = true, default_value = "Z")]
    pub descriptor: String,
    /// Norm: word metric of the standard generators, or canonical weights.
    #[arg(long, global = true, value_enum, default_value_t = SchemeChoice::Auto)]
    pub scheme: SchemeChoice,
    #[arg(long, global = true, default_value_t = 10)]
    pub radius: u64,
    /// Largest number of group elements any search may hold.
    #[arg(long, global = true, default_value_t = coarse_core::metrics::DEFAULT_BUDGET)]
    pub budget: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeChoice {
    /// Word metric when finitely generated, canonical weights otherwise.
    Auto,
    Word,
    Weighted,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTarget {
    /// Every stage of the classification witness of the descriptor.
    Classification,
    /// `Z x Z_n -> Z` on the ball of radius 10^4.
    ZTimesZn,
    /// The obvious section over the Heisenberg center (expected to fail).
    T4Center,
    /// Seeded samples of the norm axioms and left invariance.
    Axioms,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum Command {
    /// Ball sizes |B_r| for r <= radius.
    Ball {
        /// List the elements of the ball of the given radius.
        #[arg(long)]
        list: bool,
    },
    /// Exact growth sequence |S^n| of the word metric.
    Growth {
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
    },
    /// Polynomial growth degree fitted on the tail of the growth sequence.
    Growthfit {
        #[arg(long = "N", default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        tail: f64,
    },
    /// Builds a section of G -> G/H level by level and checks its bornologous bound.
    Section {
        #[arg(long, default_value_t = 8)]
        level: usize,
        #[arg(long, default_value_t = 6)]
        eps: usize,
        /// Index of H = nZ when the descriptor is Z.
        #[arg(long, default_value_t = 2)]
        index: i64,
    },
    /// Coarse type of an abelian descriptor with its verified witness.
    Witness,
    /// Verifies a witness or samples the metric axioms.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyTarget::Classification)]
        target: VerifyTarget,
        /// n for Z x Z_n.
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// Continuity moduli of every classification stage.
    Modulus,
    /// Colored covers at scale D with the exact least number of colors on small balls.
    Asdim {
        #[arg(long = "D", value_delimiter = ',', default_value = "2")]
        d: Vec<u64>,
        /// Mesh bounds for the exact search; defaults to the construction's own mesh.
        #[arg(long = "M", value_delimiter = ',')]
        m: Vec<u64>,
        /// Include the pieces of every cover.
        #[arg(long)]
        colors_witness: bool,
        #[arg(long, default_value_t = coarse_core::asdim::DEFAULT_SEARCH_LIMIT)]
        limit: usize,
    },
    /// Conjugation orbit of an element.
    Orbit {
        /// Element as JSON, one entry per summand.
        #[arg(long)]
        x: String,
        /// "whole", or a JSON list of elements generating the acting subgroup.
        #[arg(long, default_value = "whole")]
        acting: String,
        /// Treat the acting list as a finite set rather than generators.
        #[arg(long)]
        finite: bool,
        /// Acting elements examined before the orbit is declared growing.
        #[arg(long, default_value_t = 4096)]
        limit: usize,
    },
    /// Intrinsic against ambient norms of a finitely generated subgroup.
    Distortion {
        /// JSON list of generators of the subgroup.
        #[arg(long)]
        sub: String,
        #[arg(long = "N", default_value_t = 50)]
        n: u64,
    },
    /// Exact doubling ratios |B_2r| / |B_r| for 2r <= radius.
    Doubling,
}

/// Everything that determines a run; echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub common: Common,
    pub command: Command,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        common: cli.common,
        command: cli.command,
    };
    let report = commands::run(&config);
    let text = report.render(&config);
    let written = match &config.common.out {
        Some(path) => std::fs::write(path, &text).map_err(anyhow::Error::from),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(anyhow::Error::from),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if let Some(msg) = &report.error {
        eprintln!("error: {msg}");
    }
    ExitCode::from(report.exit)
}

impl Report {
    fn render(&self, config: &RunConfig) -> String {
        match config.common.format {
            Format::Json => report::json(self, config),
            Format::Csv => report::csv(self, config),
        }
    }
}
