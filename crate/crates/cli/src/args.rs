use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "vbs-swap", version, about = "Entanglement swapping on filtered bond chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate every outcome of one chain.
    Swap(CommonArgs),
    /// Trade-off constant against chain length for identical filters.
    Scan(ScanArgs),
    /// Draw outcome sequences and compare with exact probabilities.
    Sample(CommonArgs),
    /// Check the qubit engine against the state-vector oracle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Plain,
    Vbs,
    Qudit,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Local dimension (qudit mode).
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// One diagonal shared by every bond, e.g. `2,1`.
    #[arg(long, value_parser = parse_diag)]
    pub identical: Option<::std::vec::Vec<f64>>,
    /// One diagonal per bond, e.g. `2,1;1,1;1,3`.
    #[arg(long, value_parser = parse_filters, conflicts_with = "identical")]
    pub filters: Option<::std::vec::Vec<Vec<f64>>>,
    /// Number of bonds for `--identical` (internal nodes + 1).
    #[arg(long)]
    pub bonds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Smallest number of internal nodes.
    #[arg(long)]
    pub n_min: Option<usize>,
    /// Largest number of internal nodes.
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Clone, Debug, Default, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Size of the random suite used when no filters are given.
    #[arg(long)]
    pub chains: Option<usize>,
    /// Largest internal-node count in the random suite.
    #[arg(long)]
    pub max_nodes: Option<usize>,
    #[arg(long, hide = true)]
    pub corrupt_bell_order: bool,
}

pub fn parse_diag(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| format!("bad diagonal entry {x:?}: {e}"))).collect()
}

pub fn parse_filters(s: &str) -> Result<Vec<Vec<f64>>, String> {
    s.split(';').filter(|part| !part.trim().is_empty()).map(parse_diag).collect()
}
