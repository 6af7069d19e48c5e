//! Run configuration: an optional JSON file overlaid by command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};
use vbs_swap::FilterOp;

use crate::args::{CommonArgs, Format, ModeArg};
use crate::CliError;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: u64 = 100_000;
pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_VERIFY_CHAINS: usize = 20;
pub const DEFAULT_VERIFY_MAX_NODES: usize = 4;
pub const DEFAULT_SCAN_RANGE: (usize, usize) = (1, 8);

/// Keys accepted in a `--config` file. Every key is optional.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub dim: Option<usize>,
    pub mode: Option<ModeArg>,
    pub filters: Option<Vec<Vec<f64>>>,
    pub identical: Option<Vec<f64>>,
    #[serde(alias = "bonds")]
    pub n_bonds: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub chains: Option<usize>,
    pub max_nodes: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Overlay the common flags; a flag that is present replaces the file value.
    pub fn overlay(mut self, args: &CommonArgs) -> Self {
        fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        set(&mut self.dim, &args.dim);
        set(&mut self.mode, &args.mode);
        set(&mut self.n_bonds, &args.bonds);
        set(&mut self.seed, &args.seed);
        set(&mut self.samples, &args.samples);
        set(&mut self.tolerance, &args.tolerance);
        set(&mut self.format, &args.format);
        // the two filter spellings replace each other
        if args.filters.is_some() {
            self.filters.clone_from(&args.filters);
            self.identical = None;
        }
        if args.identical.is_some() {
            self.identical.clone_from(&args.identical);
            self.filters = None;
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Swap,
    Scan,
    Sample,
    Verify,
}

/// Fully resolved configuration, echoed in every output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: ModeArg,
    pub dim: usize,
    pub filters: Option<Vec<Vec<f64>>>,
    pub identical: Option<Vec<f64>>,
    pub n_bonds: Option<usize>,
    pub seed: u64,
    pub samples: Option<u64>,
    pub tolerance: Option<f64>,
    pub format: Format,
    pub n_min: Option<usize>,
    pub n_max: Option<usize>,
    pub chains: Option<usize>,
    pub max_nodes: Option<usize>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl RunConfig {
    pub fn resolve(file: FileConfig, kind: CommandKind) -> Result<Self, CliError> {
        if file.filters.is_some() && file.identical.is_some() {
            return Err(usage("give either filters or identical, not both"));
        }
        let diag_len =
            file.filters.as_ref().and_then(|f| f.first().map(Vec::len)).or(file.identical.as_ref().map(Vec::len));
        let mode = match file.mode {
            Some(m) => m,
            None if file.dim.unwrap_or(2) != 2 || diag_len.unwrap_or(2) != 2 => ModeArg::Qudit,
            None => ModeArg::Vbs,
        };
        let dim = match mode {
            ModeArg::Plain | ModeArg::Vbs => {
                if let Some(d) = file.dim.filter(|&d| d != 2) {
                    return Err(usage(format!("{} mode is for qubits, got --dim {d}", mode_name(mode))));
                }
                2
            }
            ModeArg::Qudit => file.dim.or(diag_len).unwrap_or(2),
        };
        if !(2..=8).contains(&dim) {
            return Err(usage(format!("dimension {dim} outside 2..=8")));
        }
        let lens = file.filters.iter().flatten().chain(file.identical.iter()).map(Vec::len);
        for len in lens {
            if len != dim {
                return Err(usage(format!("filter with {len} entries in a dimension-{dim} run")));
            }
        }
        if matches!(&file.filters, Some(f) if f.is_empty()) {
            return Err(usage("filters list is empty"));
        }
        if file.n_bonds == Some(0) {
            return Err(usage("a chain needs at least one bond"));
        }

        let mut cfg = RunConfig {
            mode,
            dim,
            filters: file.filters,
            identical: file.identical,
            n_bonds: file.n_bonds,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            samples: file.samples,
            tolerance: file.tolerance,
            format: file.format.unwrap_or_default(),
            n_min: file.n_min,
            n_max: file.n_max,
            chains: file.chains,
            max_nodes: file.max_nodes,
        };
        match kind {
            CommandKind::Swap => cfg.require_chain()?,
            CommandKind::Sample => {
                cfg.require_qubit("sample")?;
                cfg.require_chain()?;
                cfg.samples.get_or_insert(DEFAULT_SAMPLES);
            }
            CommandKind::Scan => {
                cfg.require_qubit("scan")?;
                if cfg.identical.is_none() {
                    return Err(usage("scan needs --identical"));
                }
                let lo = *cfg.n_min.get_or_insert(DEFAULT_SCAN_RANGE.0);
                let hi = *cfg.n_max.get_or_insert(DEFAULT_SCAN_RANGE.1);
                if lo > hi {
                    return Err(usage(format!("empty scan range {lo}..={hi}")));
                }
            }
            CommandKind::Verify => {
                if cfg.mode != ModeArg::Vbs {
                    return Err(usage("verify runs in vbs mode only"));
                }
                if cfg.identical.is_some() && cfg.n_bonds.is_none() {
                    return Err(usage("--identical needs --bonds"));
                }
                cfg.tolerance.get_or_insert(DEFAULT_VERIFY_TOLERANCE);
                if cfg.filters.is_none() && cfg.identical.is_none() {
                    cfg.chains.get_or_insert(DEFAULT_VERIFY_CHAINS);
                    cfg.max_nodes.get_or_insert(DEFAULT_VERIFY_MAX_NODES);
                }
            }
        }
        Ok(cfg)
    }

    fn require_chain(&self) -> Result<(), CliError> {
        match (&self.filters, &self.identical, self.n_bonds) {
            (Some(_), _, _) | (None, Some(_), Some(_)) => Ok(()),
            (None, Some(_), None) => Err(usage("--identical needs --bonds")),
            (None, None, _) => Err(usage("no chain given: use --identical with --bonds, or --filters")),
        }
    }

    fn require_qubit(&self, what: &str) -> Result<(), CliError> {
        if self.mode == ModeArg::Qudit {
            return Err(usage(format!("{what} supports plain and vbs mode only")));
        }
        Ok(())
    }

    /// Normalized filters of the configured chain, bond 0 first.
    pub fn chain_filters(&self) -> Result<Vec<FilterOp>, CliError> {
        let raw: Vec<Vec<f64>> = match (&self.filters, &self.identical) {
            (Some(f), _) => f.clone(),
            (None, Some(d)) => vec![d.clone(); self.n_bonds.unwrap_or(1)],
            (None, None) => return Err(usage("no chain given")),
        };
        raw.iter().map(|d| FilterOp::from_real(d).map_err(CliError::from)).collect()
    }

    /// The shared filter of a scan.
    pub fn identical_filter(&self) -> Result<FilterOp, CliError> {
        let d = self.identical.as_ref().ok_or_else(|| usage("no --identical filter"))?;
        Ok(FilterOp::from_real(d)?)
    }
}

pub fn mode_name(mode: ModeArg) -> &'static str {
    match mode {
        ModeArg::Plain => "plain",
        ModeArg::Vbs => "vbs",
        ModeArg::Qudit => "qudit",
    }
}
