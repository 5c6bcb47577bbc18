//! `pmatch`: command-line front end for `pmatch-core`.

mod report;

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use pmatch_core::io::{OutputFormat, RunConfig};
use pmatch_core::{Error, Kind};

#[derive(Debug, Parser)]
#[command(name = "pmatch", version, about = "Perfect-matching partition functions of complete hypergraphs")]
struct Cli {
    /// Scaling tolerance on max_v |1 - marginal_v|.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Node budget of the exact engines.
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    leaf_budget: u64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact ln P of a weight instance, or matching counts of a sublist instance.
    Exact { path: PathBuf },
    /// Scale a positive weight to k-stochastic.
    Scale { path: PathBuf },
    /// Interval for ln P from scaling and the sandwich constants.
    Estimate {
        path: PathBuf,
        /// Balance ratio of the weight; measured when omitted.
        #[arg(long)]
        alpha: Option<f64>,
    },
    /// Decide between many matchings and few perfect matchings for a sublist instance.
    Test {
        path: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        gamma_override: Option<f64>,
    },
    /// ln Φ_k(m), with the exact integer when k·m <= 20.
    Phi { k: usize, m: usize },
    /// Lower bound on size-s matchings of a d-regular k-uniform hypergraph.
    BoundRegular { k: usize, m: usize, d: u64, s: usize },
    /// Write a random instance to standard output.
    Gen {
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Weights are drawn uniformly from [1, alpha].
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Emit a sublist keeping each edge with this probability instead of weights.
        #[arg(long)]
        sublist: Option<f64>,
    },
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub(crate) fn read_input(path: &PathBuf) -> anyhow::Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf).context("reading standard input")?;
        Ok(buf)
    } else {
        std::fs::read(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        tol: cli.tol,
        max_sweeps: cli.max_sweeps,
        leaf_budget: cli.leaf_budget,
        seed: cli.seed,
        output_format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Machine => OutputFormat::Machine,
        },
    };
    match report::run(&cli.command, &config) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            let code = report::exit_code(&err);
            eprint!("{}", report::diagnostic(&err, config.output_format));
            ExitCode::from(code)
        }
    }
}
