//! Acceptance gates. Each test prints one PASS/FAIL line on standard error
//! (written directly so the test harness does not swallow it) and then
//! asserts.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vbs_swap::oracle::{build_vbs_state, cross_check, measure_internal_sites, CrossCheckOptions};
use vbs_swap::qubit::{p_sum_transfer, sample_outcomes, total_variation, tradeoff_log_constant, Mode, SwapChain};
use vbs_swap::qudit::QuditChain;
use vbs_swap::{partial_trace, FilterOp};

fn report(id: u32, name: &str, passed: bool, detail: &str, elapsed: Duration) {
    let line = format!(
        "acceptance {id} [{}] {name}: {detail} ({:.3} ms)\n",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64() * 1e3
    );
    std::io::stderr().write_all(line.as_bytes()).unwrap();
}

fn random_chain(rng: &mut ChaCha8Rng, dim: usize, nodes: usize) -> Vec<FilterOp> {
    (0..=nodes).map(|_| FilterOp::random(rng, dim, 0.05)).collect()
}

fn mode_for(k: usize) -> Mode {
    if k.is_multiple_of(2) {
        Mode::Vbs
    } else {
        Mode::Plain
    }
}

/// Least-squares line through `(x, y)`; returns the largest residual.
fn affine_residual(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).abs()).fold(0.0, f64::max)
}

#[test]
fn criterion_1_ideal_swap() {
    let chain = SwapChain::identical(FilterOp::from_real(&[1.0, 1.0]).unwrap(), 2, Mode::Vbs).unwrap();
    let t = Instant::now();
    let rep = chain.enumerate_outcomes().unwrap();
    let elapsed = t.elapsed();
    let worst_p = rep.records.iter().map(|r| (r.prob - 1.0 / 3.0).abs()).fold(0.0, f64::max);
    let worst_c = rep.records.iter().map(|r| (r.concurrence - 1.0).abs()).fold(0.0, f64::max);
    let passed = rep.records.len() == 3 && worst_p <= 1e-12 && worst_c <= 1e-12 && elapsed < Duration::from_millis(1);
    let detail = format!("{} outcomes, max |prob-1/3| = {worst_p:.1e}, max |C-1| = {worst_c:.1e}", rep.records.len());
    report(1, "ideal swap", passed, &detail, elapsed);
    assert!(passed, "{detail}, {elapsed:?}");
}

#[test]
fn criterion_2_tradeoff_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let nodes = rng.random_range(1..=6);
        let chain = SwapChain::new(random_chain(&mut rng, 2, nodes), mode_for(k)).unwrap();
        let rep = chain.enumerate_outcomes().unwrap();
        let p_sum: f64 = rep.records.iter().map(|r| r.weight).sum();
        let product: f64 = chain.filters().iter().map(|f| f.concurrence()).product();
        for r in &rep.records {
            worst = worst.max((r.prob * r.concurrence - product / p_sum).abs());
        }
    }
    let elapsed = t.elapsed();
    let passed = worst <= 1e-10 && elapsed < Duration::from_secs(30);
    let detail = format!("100 chains, max |prob*C - prod C_j / P_sum| = {worst:.2e}");
    report(2, "trade-off law", passed, &detail, elapsed);
    assert!(passed, "{detail}, {elapsed:?}");
}

#[test]
fn criterion_3_worked_instance() {
    let f = FilterOp::from_real(&[2.0, 1.0]).unwrap();
    let t = Instant::now();
    let rep = SwapChain::identical(f.clone(), 2, Mode::Vbs).unwrap().enumerate_outcomes().unwrap();
    let mut table: Vec<(f64, f64)> = rep.records.iter().map(|r| (r.prob, r.concurrence)).collect();
    table.sort_by(|a, b| b.0.total_cmp(&a.0));
    let expected = [(17.0 / 33.0, 8.0 / 17.0), (8.0 / 33.0, 1.0), (8.0 / 33.0, 1.0)];
    let mut worst = (rep.p_sum - 2.64).abs();
    for (got, want) in table.iter().zip(&expected) {
        worst = worst.max((got.0 - want.0).abs()).max((got.1 - want.1).abs());
        worst = worst.max((got.0 * got.1 - 8.0 / 33.0).abs());
    }

    // brute-force confirmation from the explicit spin-chain state
    let state = build_vbs_state(&[f.clone(), f]).unwrap();
    let mut oracle_worst: f64 = 0.0;
    for r in &rep.records {
        let m = measure_internal_sites(&state, &r.indices).unwrap();
        let rho = partial_trace(m.end_pair.as_ref().unwrap(), &[0]).unwrap();
        let c = 2.0 * rho.determinant().unwrap().re.max(0.0).sqrt();
        oracle_worst = oracle_worst.max((m.weight - r.prob).abs()).max((c - r.concurrence).abs());
    }
    let elapsed = t.elapsed();
    let passed = table.len() == 3 && worst <= 1e-12 && oracle_worst <= 1e-12;
    let detail = format!("max deviation from golden values {worst:.1e}, from state-vector model {oracle_worst:.1e}");
    report(3, "worked trade-off instance", passed, &detail, elapsed);
    assert!(passed, "{detail}");
}

#[test]
fn criterion_4_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let t = Instant::now();
    let mut worst_w: f64 = 0.0;
    let mut worst_f: f64 = 1.0;
    let mut outcomes = 0;
    for _ in 0..20 {
        let nodes = rng.random_range(1..=4);
        let filters = random_chain(&mut rng, 2, nodes);
        let rep = cross_check(&filters, CrossCheckOptions::default()).unwrap();
        for o in &rep.outcomes {
            worst_w = worst_w.max(o.weight_deviation);
            worst_f = worst_f.min(o.fidelity);
            outcomes += 1;
        }
    }
    let elapsed = t.elapsed();
    let passed = worst_w <= 1e-9 && worst_f >= 1.0 - 1e-9 && elapsed < Duration::from_secs(60);
    let detail = format!(
        "20 chains, {outcomes} outcomes, max weight deviation {worst_w:.1e}, min fidelity 1 - {:.1e}",
        1.0 - worst_f
    );
    report(4, "oracle equivalence", passed, &detail, elapsed);
    assert!(passed, "{detail}, {elapsed:?}");
}

#[test]
fn criterion_5_qudit_tradeoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let t = Instant::now();
    let mut worst_prob_law: f64 = 0.0;
    let mut worst_total: f64 = 0.0;
    let mut worst_weight_law: f64 = 0.0;
    let mut worst_normalized_law: f64 = 0.0;
    let mut bit_match = true;
    for k in 0..50 {
        let dim = 2 + k % 4;
        let nodes = rng.random_range(1..=3);
        let filters = random_chain(&mut rng, dim, nodes);
        let product: f64 = filters.iter().map(|f| f.concurrence()).product();
        let rep = QuditChain::new(filters.clone()).unwrap().enumerate_outcomes().unwrap();
        let p_sum: f64 = rep.records.iter().map(|r| r.weight).sum();
        for r in &rep.records {
            worst_prob_law = worst_prob_law.max((r.prob * r.concurrence - product).abs());
            worst_weight_law = worst_weight_law.max((r.weight * r.concurrence - product).abs());
            worst_normalized_law = worst_normalized_law.max((r.prob * r.concurrence - product / p_sum).abs());
        }
        worst_total = worst_total.max((rep.records.iter().map(|r| r.prob).sum::<f64>() - 1.0).abs());
        if dim == 2 {
            let qubit = SwapChain::new(filters, Mode::Plain).unwrap().enumerate_outcomes().unwrap();
            bit_match &= qubit == rep;
        }
    }
    let elapsed = t.elapsed();
    let passed = worst_prob_law <= 1e-9 && worst_total <= 1e-12 && bit_match;
    let detail = format!(
        "max |prob*Ce - prod Ce_k| = {worst_prob_law:.2e}, max |sum prob - 1| = {worst_total:.1e}, \
         D=2 bit-match {bit_match}; for reference max |weight*Ce - prod Ce_k| = {worst_weight_law:.1e}, \
         max |prob*Ce - prod Ce_k / P_sum| = {worst_normalized_law:.1e}"
    );
    report(5, "qudit trade-off", passed, &detail, elapsed);
    assert!(passed, "{detail}");
}

#[test]
fn criterion_6_exponential_decay() {
    let f = FilterOp::from_real(&[2.0, 1.0]).unwrap();
    assert!((f.concurrence() - 0.8).abs() < 1e-15);
    let t = Instant::now();
    let mut residuals = Vec::new();
    for mode in [Mode::Vbs, Mode::Plain] {
        let points: Vec<(f64, f64)> = (1..=8)
            .map(|n| {
                let chain = SwapChain::identical(f.clone(), n + 1, mode).unwrap();
                (n as f64, tradeoff_log_constant(&chain))
            })
            .collect();
        residuals.push(affine_residual(&points));
    }
    let long = SwapChain::identical(f, 100_001, Mode::Vbs).unwrap();
    let t_long = Instant::now();
    let log_k = tradeoff_log_constant(&long);
    let long_elapsed = t_long.elapsed();
    let elapsed = t.elapsed();
    let passed = residuals.iter().all(|&r| r <= 1e-6) && log_k.is_finite() && long_elapsed < Duration::from_secs(1);
    let detail = format!(
        "affine-fit residual over N=1..8: vbs {:.2e}, plain {:.2e}; N=1e5 transfer {:.0} ms",
        residuals[0],
        residuals[1],
        long_elapsed.as_secs_f64() * 1e3
    );
    report(6, "exponential decay", passed, &detail, elapsed);
    assert!(passed, "{detail}");
}

#[test]
fn criterion_7_transfer_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..50 {
        let nodes = rng.random_range(0..=8);
        let chain = SwapChain::new(random_chain(&mut rng, 2, nodes), mode_for(k)).unwrap();
        let enumerated = chain.enumerate_outcomes().unwrap().p_sum;
        worst = worst.max((p_sum_transfer(&chain) / enumerated - 1.0).abs());
    }
    let elapsed = t.elapsed();
    let passed = worst <= 1e-12;
    let detail = format!("50 chains, max relative error {worst:.1e}");
    report(7, "transfer vs enumeration", passed, &detail, elapsed);
    assert!(passed, "{detail}");
}

#[test]
fn criterion_8_sampling_fidelity() {
    let chain = SwapChain::identical(FilterOp::from_real(&[2.0, 1.0]).unwrap(), 2, Mode::Vbs).unwrap();
    let t = Instant::now();
    let exact = chain.enumerate_outcomes().unwrap();
    let table = sample_outcomes(&chain, 100_000, 42);
    let tv = total_variation(&table, &exact);
    let same_table = table == sample_outcomes(&chain, 100_000, 42);
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_vbs-swap"))
            .args([
                "sample",
                "--mode",
                "vbs",
                "--identical",
                "2,1",
                "--bonds",
                "2",
                "--samples",
                "100000",
                "--seed",
                "42",
            ])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let same_bytes = a.status.success() && a.stdout == b.stdout;
    let elapsed = t.elapsed();
    let passed = tv <= 0.02 && same_table && same_bytes;
    let detail = format!("TV = {tv:.4}, reproducible table {same_table}, byte-identical CLI output {same_bytes}");
    report(8, "sampling fidelity", passed, &detail, elapsed);
    assert!(passed, "{detail}");
}
