//! The four subcommands. Each returns its rendered output and exit code;
//! writing it out is left to the caller.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use vbs_swap::oracle::{cross_check, CrossCheckOptions, CrossCheckReport, MAX_CROSS_CHECK_SITES};
use vbs_swap::qubit::{log_p_sum_profile, log_p_sum_transfer, sample_outcomes, Mode, SwapChain};
use vbs_swap::qudit::QuditChain;
use vbs_swap::report::render_label;
use vbs_swap::{FilterOp, TradeoffReport};

use crate::args::{Cli, Command, CommonArgs, Format, ModeArg};
use crate::config::{mode_name, CommandKind, FileConfig, RunConfig};
use crate::emit::{csv, json, num};
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Largest node count `scan` will sweep.
pub const SCAN_BUDGET: usize = 10_000_000;
/// Smallest entry modulus of the random verify suite.
const RANDOM_MIN_MODULUS: f64 = 0.05;

/// Output of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub text: String,
    pub exit_code: u8,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, exit_code: 0 }
    }
}

impl Command {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Swap(c) | Command::Sample(c) => c,
            Command::Scan(s) => &s.common,
            Command::Verify(v) => &v.common,
        }
    }

    pub fn out_path(&self) -> Option<&Path> {
        self.common().out.as_deref()
    }
}

/// Resolve the configuration of `cli` and run its subcommand.
pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    let common = cli.command.common();
    let file = match &common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let mut file = file.overlay(common);
    let kind = match &cli.command {
        Command::Swap(_) => CommandKind::Swap,
        Command::Sample(_) => CommandKind::Sample,
        Command::Scan(s) => {
            file.n_min = s.n_min.or(file.n_min);
            file.n_max = s.n_max.or(file.n_max);
            CommandKind::Scan
        }
        Command::Verify(v) => {
            file.chains = v.chains.or(file.chains);
            file.max_nodes = v.max_nodes.or(file.max_nodes);
            CommandKind::Verify
        }
    };
    let cfg = RunConfig::resolve(file, kind)?;
    match &cli.command {
        Command::Swap(_) => cmd_swap(&cfg),
        Command::Scan(_) => cmd_scan(&cfg),
        Command::Sample(_) => cmd_sample(&cfg),
        Command::Verify(v) => cmd_verify(&cfg, v.corrupt_bell_order),
    }
}

fn real_diag(f: &FilterOp) -> Vec<f64> {
    f.diag().iter().map(|z| z.re).collect()
}

fn qubit_mode(mode: ModeArg) -> Mode {
    match mode {
        ModeArg::Plain => Mode::Plain,
        _ => Mode::Vbs,
    }
}

#[derive(Serialize)]
struct OutcomeRow {
    index: String,
    weight: f64,
    prob: f64,
    concurrence: f64,
    prob_times_c: f64,
}

#[derive(Serialize)]
struct SwapOutput<'a> {
    version: &'static str,
    config_echo: &'a RunConfig,
    seed: u64,
    dim: usize,
    mode: &'static str,
    n_bonds: usize,
    filters: Vec<Vec<f64>>,
    p_sum: f64,
    bond_concurrences: &'a [f64],
    tradeoff_constant: f64,
    max_residual: f64,
    max_weight_residual: f64,
    outcomes: Vec<OutcomeRow>,
}

pub fn cmd_swap(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let filters = cfg.chain_filters()?;
    let n_bonds = filters.len();
    let normalized: Vec<Vec<f64>> = filters.iter().map(real_diag).collect();
    let report: TradeoffReport = match cfg.mode {
        ModeArg::Qudit => QuditChain::new(filters)?.enumerate_outcomes()?,
        m => SwapChain::new(filters, qubit_mode(m))?.enumerate_outcomes()?,
    };
    let rows: Vec<OutcomeRow> = report
        .records
        .iter()
        .map(|r| OutcomeRow {
            index: r.label(),
            weight: r.weight,
            prob: r.prob,
            concurrence: r.concurrence,
            prob_times_c: r.prob_times_c(),
        })
        .collect();
    let text = match cfg.format {
        Format::Json => json(&SwapOutput {
            version: VERSION,
            config_echo: cfg,
            seed: cfg.seed,
            dim: cfg.dim,
            mode: mode_name(cfg.mode),
            n_bonds,
            filters: normalized,
            p_sum: report.p_sum,
            bond_concurrences: &report.bond_concurrences,
            tradeoff_constant: report.constant,
            max_residual: report.max_residual,
            max_weight_residual: report.max_weight_residual,
            outcomes: rows,
        }),
        Format::Csv => csv(
            &["index", "weight", "prob", "concurrence", "prob_times_c"],
            rows.into_iter()
                .map(|r| vec![r.index, num(r.weight), num(r.prob), num(r.concurrence), num(r.prob_times_c)]),
        )?,
    };
    Ok(Rendered::ok(text))
}

#[derive(Serialize)]
struct ScanRow {
    n: usize,
    constant: f64,
    log_constant: f64,
}

#[derive(Serialize)]
struct ScanOutput<'a> {
    version: &'static str,
    config_echo: &'a RunConfig,
    seed: u64,
    dim: usize,
    mode: &'static str,
    filter: Vec<f64>,
    bond_concurrence: f64,
    rows: Vec<ScanRow>,
    slope: f64,
    intercept: f64,
    max_fit_residual: f64,
}

/// Least-squares line through `(x, y)`: slope, intercept and the largest
/// absolute residual. NaN when fewer than two points.
pub fn fit_line(points: &[(f64, f64)]) -> (f64, f64, f64) {
    if points.len() < 2 {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let resid = points.iter().map(|p| (p.1 - intercept - slope * p.0).abs()).fold(0.0, f64::max);
    (slope, intercept, resid)
}

pub fn cmd_scan(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let filter = cfg.identical_filter()?;
    let (lo, hi) = (cfg.n_min.unwrap_or(0), cfg.n_max.unwrap_or(0));
    if hi > SCAN_BUDGET {
        return Err(CliError::Budget(format!("scan up to N = {hi} exceeds the limit {SCAN_BUDGET}")));
    }
    let mode = qubit_mode(cfg.mode);
    let log_c = filter.concurrence().ln();
    let profile = log_p_sum_profile(&filter, mode, hi);
    let rows: Vec<ScanRow> = (lo..=hi)
        .map(|n| {
            let log_constant = (n + 1) as f64 * log_c - profile[n];
            ScanRow { n, constant: log_constant.exp(), log_constant }
        })
        .collect();
    let points: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.log_constant.is_finite()).map(|r| (r.n as f64, r.log_constant)).collect();
    let (slope, intercept, max_fit_residual) = fit_line(&points);
    let text = match cfg.format {
        Format::Json => json(&ScanOutput {
            version: VERSION,
            config_echo: cfg,
            seed: cfg.seed,
            dim: cfg.dim,
            mode: mode_name(cfg.mode),
            filter: real_diag(&filter),
            bond_concurrence: filter.concurrence(),
            rows,
            slope,
            intercept,
            max_fit_residual,
        }),
        Format::Csv => csv(
            &["n", "constant", "log_constant"],
            rows.into_iter().map(|r| vec![r.n.to_string(), num(r.constant), num(r.log_constant)]),
        )?,
    };
    Ok(Rendered::ok(text))
}

#[derive(Serialize)]
struct SampleRow {
    index: String,
    count: u64,
    frequency: f64,
    prob: f64,
}

#[derive(Serialize)]
struct SampleOutput<'a> {
    version: &'static str,
    config_echo: &'a RunConfig,
    seed: u64,
    dim: usize,
    mode: &'static str,
    n_bonds: usize,
    filters: Vec<Vec<f64>>,
    n_samples: u64,
    p_sum: f64,
    total_variation: f64,
    outcomes: Vec<SampleRow>,
}

pub fn cmd_sample(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let filters = cfg.chain_filters()?;
    let n_bonds = filters.len();
    let normalized: Vec<Vec<f64>> = filters.iter().map(real_diag).collect();
    let chain = SwapChain::new(filters, qubit_mode(cfg.mode))?;
    let n_samples = cfg.samples.unwrap_or(0);
    if n_samples == 0 {
        return Err(CliError::Usage("sample needs --samples > 0".into()));
    }
    let table = sample_outcomes(&chain, n_samples, cfg.seed);
    let log_p_sum = log_p_sum_transfer(&chain);
    let mut rows = Vec::with_capacity(table.counts.len());
    let mut sampled_mass = 0.0;
    let mut listed_gap = 0.0;
    for (seq, &count) in &table.counts {
        let prob = (chain.outcome_weight(seq)?.ln() - log_p_sum).exp();
        let frequency = count as f64 / n_samples as f64;
        sampled_mass += prob;
        listed_gap += (frequency - prob).abs();
        rows.push(SampleRow { index: render_label(seq), count, frequency, prob });
    }
    // outcomes never drawn contribute their whole probability
    let total_variation = 0.5 * (listed_gap + (1.0 - sampled_mass).max(0.0));
    let text = match cfg.format {
        Format::Json => json(&SampleOutput {
            version: VERSION,
            config_echo: cfg,
            seed: cfg.seed,
            dim: cfg.dim,
            mode: mode_name(cfg.mode),
            n_bonds,
            filters: normalized,
            n_samples,
            p_sum: log_p_sum.exp(),
            total_variation,
            outcomes: rows,
        }),
        Format::Csv => csv(
            &["index", "count", "frequency", "prob"],
            rows.into_iter().map(|r| vec![r.index, r.count.to_string(), num(r.frequency), num(r.prob)]),
        )?,
    };
    Ok(Rendered::ok(text))
}

#[derive(Serialize)]
struct CheckRow {
    index: String,
    oracle_weight: f64,
    transfer_prob: f64,
    weight_deviation: f64,
    fidelity: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ChainCheck {
    chain: usize,
    /// Normalized diagonals as `[re, im]` pairs.
    filters: Vec<Vec<[f64; 2]>>,
    passed: bool,
    worst_fidelity: f64,
    worst_weight_deviation: f64,
    outcomes: Vec<CheckRow>,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    version: &'static str,
    config_echo: &'a RunConfig,
    seed: u64,
    tolerance: f64,
    passed: bool,
    worst_fidelity: f64,
    worst_weight_deviation: f64,
    chains: Vec<ChainCheck>,
}

/// The seeded random suite run by `verify` when no chain is given.
pub fn random_suite(seed: u64, chains: usize, max_nodes: usize) -> Vec<Vec<FilterOp>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..chains)
        .map(|_| {
            let nodes = rng.random_range(1..=max_nodes);
            (0..=nodes).map(|_| FilterOp::random(&mut rng, 2, RANDOM_MIN_MODULUS)).collect()
        })
        .collect()
}

pub fn cmd_verify(cfg: &RunConfig, corrupt_bell_order: bool) -> Result<Rendered, CliError> {
    let suite = match (&cfg.filters, &cfg.identical) {
        (None, None) => {
            let max_nodes = cfg.max_nodes.unwrap_or(1);
            if max_nodes == 0 || max_nodes > MAX_CROSS_CHECK_SITES {
                return Err(CliError::Budget(format!(
                    "verify handles 1..={MAX_CROSS_CHECK_SITES} internal nodes, asked for {max_nodes}"
                )));
            }
            random_suite(cfg.seed, cfg.chains.unwrap_or(0), max_nodes)
        }
        _ => vec![cfg.chain_filters()?],
    };
    let options = CrossCheckOptions { tolerance: cfg.tolerance.unwrap_or(0.0), corrupt_bell_order };
    let reports: Vec<(Vec<FilterOp>, CrossCheckReport)> = suite
        .into_iter()
        .map(|filters| cross_check(&filters, options).map(|r| (filters, r)))
        .collect::<Result<_, _>>()?;

    let chains: Vec<ChainCheck> = reports
        .iter()
        .enumerate()
        .map(|(k, (filters, report))| ChainCheck {
            chain: k,
            filters: filters.iter().map(|f| f.diag().iter().map(|z| [z.re, z.im]).collect()).collect(),
            passed: report.passed(),
            worst_fidelity: report.worst_fidelity,
            worst_weight_deviation: report.worst_weight_deviation,
            outcomes: report
                .outcomes
                .iter()
                .map(|o| CheckRow {
                    index: render_label(&o.indices),
                    oracle_weight: o.oracle_weight,
                    transfer_prob: o.transfer_prob,
                    weight_deviation: o.weight_deviation,
                    fidelity: o.fidelity,
                    passed: o.passed,
                })
                .collect(),
        })
        .collect();
    let passed = chains.iter().all(|c| c.passed);
    let worst_fidelity = chains.iter().map(|c| c.worst_fidelity).fold(1.0, f64::min);
    let worst_weight_deviation = chains.iter().map(|c| c.worst_weight_deviation).fold(0.0, f64::max);
    let text = match cfg.format {
        Format::Json => json(&VerifyOutput {
            version: VERSION,
            config_echo: cfg,
            seed: cfg.seed,
            tolerance: options.tolerance,
            passed,
            worst_fidelity,
            worst_weight_deviation,
            chains,
        }),
        Format::Csv => {
            let rows = chains.into_iter().flat_map(|c| {
                let k = c.chain.to_string();
                c.outcomes.into_iter().map(move |o| {
                    vec![
                        k.clone(),
                        o.index,
                        num(o.oracle_weight),
                        num(o.transfer_prob),
                        num(o.weight_deviation),
                        num(o.fidelity),
                        o.passed.to_string(),
                    ]
                })
            });
            csv(&["chain", "index", "oracle_weight", "transfer_prob", "weight_deviation", "fidelity", "passed"], rows)?
        }
    };
    Ok(Rendered { text, exit_code: if passed { 0 } else { 1 } })
}
