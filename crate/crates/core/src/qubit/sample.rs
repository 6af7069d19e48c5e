//! Exact sampling of Bell-measurement outcome sequences.
//!
//! The conditional law of *i<sub>k</sub>* given *i*<sub>1</sub> … *i*<sub>*k*−1</sub>
//! needs the total weight of every continuation. That total is a linear
//! functional of the partial state, ρ ↦ Tr(*E<sub>k</sub>* ρ), where the effect
//! *E<sub>k</sub>* is built right to left by the adjoint map
//! *E*<sub>*k*−1</sub> = Σ<sub>*i*</sub> σ<sub>*i*</sub>† *T<sub>k</sub>*† *E<sub>k</sub> T<sub>k</sub>* σ<sub>*i*</sub>,
//! starting from *E<sub>N</sub>* = *I*. Sampling then walks the nodes left to
//! right. Effects are rescaled freely since only ratios matter.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::mat2::{self, Mat2};
use super::SwapChain;
use crate::linalg::ComplexMatrix;
use crate::report::TradeoffReport;

/// Counts of sampled outcome sequences, keyed by label sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    pub seed: u64,
    pub n_samples: u64,
    pub counts: BTreeMap<Vec<usize>, u64>,
}

impl FrequencyTable {
    pub fn frequency(&self, indices: &[usize]) -> f64 {
        self.counts.get(indices).copied().unwrap_or(0) as f64 / self.n_samples as f64
    }
}

/// Draws outcome sequences of one chain with their exact probabilities.
pub struct OutcomeSampler<'a> {
    chain: &'a SwapChain,
    /// `effects[k]` is *E<sub>k</sub>* for k = 1..=N; index 0 is unused.
    effects: Vec<Mat2>,
    /// `kraus[k][j]` is *T<sub>k</sub>* σ for the j-th label of the mode.
    kraus: Vec<Vec<Mat2>>,
    labels: Vec<usize>,
    rng: ChaCha8Rng,
}

impl<'a> OutcomeSampler<'a> {
    pub fn new(chain: &'a SwapChain, seed: u64) -> Self {
        let n = chain.n_nodes();
        let labels: Vec<usize> = chain.mode().labels().collect();
        let paulis: Vec<Mat2> = labels.iter().map(|&i| mat2::from_matrix(chain.sigma(i))).collect();
        let kraus: Vec<Vec<Mat2>> = chain
            .filters()
            .iter()
            .map(|f| {
                let t = mat2::from_matrix(&f.matrix());
                paulis.iter().map(|s| mat2::mul(&t, s)).collect()
            })
            .collect();
        let mut effects = vec![mat2::from_matrix(&ComplexMatrix::identity(2)); n + 1];
        for k in (1..n).rev() {
            // E_k = Σ (T_{k+1} σ)† E_{k+1} (T_{k+1} σ)
            let mut acc = mat2::ZERO2;
            for a in &kraus[k + 1] {
                mat2::add_assign(&mut acc, &mat2::sandwich(&mat2::adjoint(a), &effects[k + 1]));
            }
            mat2::renormalize(&mut acc);
            effects[k] = acc;
        }
        Self { chain, effects, kraus, labels, rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// One outcome sequence, node 1 first.
    pub fn draw(&mut self) -> Vec<usize> {
        let n = self.chain.n_nodes();
        let t0 = mat2::from_matrix(&self.chain.filters()[0].matrix());
        let mut rho = mat2::sandwich(&t0, &mat2::from_matrix(&ComplexMatrix::identity(2)));
        let mut out = Vec::with_capacity(n);
        let mut candidates = vec![mat2::ZERO2; self.labels.len()];
        let mut weights = vec![0.0; self.labels.len()];
        for k in 1..=n {
            for (j, a) in self.kraus[k].iter().enumerate() {
                candidates[j] = mat2::sandwich(a, &rho);
                weights[j] = mat2::trace_product(&self.effects[k], &candidates[j]).max(0.0);
            }
            let total: f64 = weights.iter().sum();
            let u = self.rng.random::<f64>() * total;
            let mut pick = weights.len() - 1;
            let mut cum = 0.0;
            for (j, w) in weights.iter().enumerate() {
                cum += w;
                if u < cum {
                    pick = j;
                    break;
                }
            }
            // never land on a zero-weight outcome through rounding
            while weights[pick] == 0.0 && pick > 0 {
                pick -= 1;
            }
            out.push(self.labels[pick]);
            rho = candidates[pick];
            mat2::renormalize(&mut rho);
        }
        out
    }
}

/// Draw `n_samples` outcome sequences and tally them. Deterministic for a
/// fixed seed.
pub fn sample_outcomes(chain: &SwapChain, n_samples: u64, seed: u64) -> FrequencyTable {
    let mut sampler = OutcomeSampler::new(chain, seed);
    let mut counts = BTreeMap::new();
    for _ in 0..n_samples {
        *counts.entry(sampler.draw()).or_insert(0) += 1;
    }
    FrequencyTable { seed, n_samples, counts }
}

/// ½ Σ |frequency − prob| over every outcome of `exact`.
pub fn total_variation(table: &FrequencyTable, exact: &TradeoffReport) -> f64 {
    let listed: f64 = exact.records.iter().map(|r| (table.frequency(&r.indices) - r.prob).abs()).sum();
    // mass sampled on sequences missing from the table
    let unlisted: u64 =
        table.counts.iter().filter(|(k, _)| !exact.records.iter().any(|r| &r.indices == *k)).map(|(_, c)| c).sum();
    0.5 * (listed + unlisted as f64 / table.n_samples as f64)
}
