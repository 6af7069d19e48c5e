//! Entanglement swapping along a chain of filtered qubit bonds.
//!
//! A chain has *N* + 1 bonds joined at *N* internal nodes. A Bell measurement
//! at node *k* with outcome *i<sub>k</sub>* leaves the two end qubits in
//! (*I* ⊗ *M*)∣Φ⁺⟩ (up to normalization) with
//!
//! * plain mode: *M* = *T<sub>N</sub>* σ<sub>*i<sub>N</sub>*</sub> ⋯ σ<sub>*i*<sub>1</sub></sub> *T*<sub>0</sub>,
//!   outcomes *i* ∈ {0, 1, 2, 3}, measured in {(*I* ⊗ σ<sub>*i*</sub>)∣Φ⁺⟩};
//! * vbs mode: *M* = σ<sub>3</sub> *T<sub>N</sub>* σ<sub>*i<sub>N</sub>*</sub> ⋯ σ<sub>*i*<sub>1</sub></sub> *T*<sub>0</sub>,
//!   outcomes *i* ∈ {1, 2, 3}, measured in the triplet basis
//!   {(σ<sub>3</sub> ⊗ σ<sub>*i*</sub>)∣Φ⁺⟩}. The singlet never occurs because
//!   each internal site is projected onto its symmetric (spin-1) subspace.
//!
//! Pauli labels follow σ<sub>0</sub> = *I*, σ<sub>1</sub> = σ<sub>*x*</sub>,
//! σ<sub>2</sub> = σ<sub>*z*</sub>, σ<sub>3</sub> = σ<sub>*x*</sub>σ<sub>*z*</sub>.
//!
//! The raw weight of an outcome is *P* = ½ Tr(*M M*†), its probability is
//! *P*/*P*<sub>sum</sub>, and its concurrence is 2|det *M*|/Tr(*M M*†). Because
//! |det σ<sub>*i*</sub>| = 1, |det *M*| = Π<sub>*j*</sub> *C<sub>j</sub>*, so
//! *P*·*C* = Π *C<sub>j</sub>* and prob·*C* = Π *C<sub>j</sub>*/*P*<sub>sum</sub>
//! for every outcome.
//!
//! # Example
//! ```
//! use vbs_swap::{FilterOp, qubit::{Mode, SwapChain}};
//!
//! // two identical bonds with α² = 0.8
//! let f = FilterOp::from_real(&[2.0, 1.0]).unwrap();
//! let chain = SwapChain::identical(f, 2, Mode::Vbs).unwrap();
//! let report = chain.enumerate_outcomes().unwrap();
//! assert!((report.p_sum - 2.64).abs() < 1e-12);
//! for r in &report.records {
//!     assert!((r.prob_times_c() - 8.0 / 33.0).abs() < 1e-12);
//! }
//! ```

mod mat2;
mod sample;
mod transfer;

pub use sample::{sample_outcomes, total_variation, FrequencyTable, OutcomeSampler};
pub use transfer::{log_p_sum_profile, log_p_sum_transfer, p_sum_transfer, tradeoff_constant, tradeoff_log_constant};

use crate::error::{Error, Result};
use crate::filter::FilterOp;
use crate::linalg::{state_from_operator, ComplexMatrix, StateVector};
use crate::report::{OutcomeRecord, TradeoffReport};

/// Largest outcome count `enumerate_outcomes` will walk.
pub const ENUMERATION_BUDGET: u128 = 43_046_721; // 3^16

/// Measurement basis used at the internal nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Complete Bell basis, four outcomes per node.
    Plain,
    /// Triplet Bell basis on symmetrized sites, three outcomes per node.
    Vbs,
}

impl Mode {
    /// Smallest outcome label.
    pub fn first_label(self) -> usize {
        match self {
            Mode::Plain => 0,
            Mode::Vbs => 1,
        }
    }

    /// Number of outcomes per node.
    pub fn base(self) -> usize {
        match self {
            Mode::Plain => 4,
            Mode::Vbs => 3,
        }
    }

    pub fn labels(self) -> std::ops::Range<usize> {
        self.first_label()..4
    }

    fn check_label(self, i: usize) -> Result<()> {
        match (self, i) {
            (_, 4..) => Err(Error::OutOfRange { index: i, bound: 4 }),
            (Mode::Vbs, 0) => Err(Error::SingletExcluded),
            _ => Ok(()),
        }
    }
}

/// σ<sub>i</sub> in the ordering *I*, σ<sub>x</sub>, σ<sub>z</sub>, σ<sub>x</sub>σ<sub>z</sub>.
pub fn pauli(i: usize) -> Result<ComplexMatrix> {
    let entries: [f64; 4] = match i {
        0 => [1.0, 0.0, 0.0, 1.0],
        1 => [0.0, 1.0, 1.0, 0.0],
        2 => [1.0, 0.0, 0.0, -1.0],
        3 => [0.0, -1.0, 1.0, 0.0],
        _ => return Err(Error::OutOfRange { index: i, bound: 4 }),
    };
    ComplexMatrix::from_real(2, 2, &entries)
}

/// Bell basis state for label `i`: (*I* ⊗ σ<sub>i</sub>)∣Φ⁺⟩ in plain mode and
/// (σ<sub>3</sub> ⊗ σ<sub>i</sub>)∣Φ⁺⟩ in vbs mode.
pub fn bell_state(mode: Mode, i: usize) -> Result<StateVector> {
    mode.check_label(i)?;
    let s = pauli(i)?;
    let op = match mode {
        Mode::Plain => s,
        // (A ⊗ B)|Φ+⟩ = (I ⊗ B Aᵀ)|Φ+⟩
        Mode::Vbs => &s * &pauli(3)?.transpose(),
    };
    state_from_operator(&op, 2)
}

/// Ordered product *T<sub>N</sub> L<sub>N</sub>* ⋯ *L*<sub>1</sub> *T*<sub>0</sub>,
/// accumulated right to left.
pub(crate) fn chain_product(filters: &[FilterOp], links: &[&ComplexMatrix]) -> ComplexMatrix {
    debug_assert_eq!(filters.len(), links.len() + 1);
    let mut acc = filters[0].matrix();
    for (t, link) in filters[1..].iter().zip(links) {
        acc = t.apply_left(&(*link * &acc));
    }
    acc
}

/// Digits of `code` in `base`, least significant first.
pub(crate) fn decode(mut code: u64, base: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((code % base as u64) as usize);
        code /= base as u64;
    }
    out
}

pub(crate) fn outcome_count(base: usize, n: usize) -> u128 {
    (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX)
}

/// A qubit swapping chain: filters *T*<sub>0</sub> … *T<sub>N</sub>* and a
/// measurement mode.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapChain {
    filters: Vec<FilterOp>,
    mode: Mode,
    paulis: [ComplexMatrix; 4],
}

impl SwapChain {
    pub fn new(filters: Vec<FilterOp>, mode: Mode) -> Result<Self> {
        if filters.is_empty() {
            return Err(Error::Invalid("a chain needs at least one bond".into()));
        }
        if let Some(f) = filters.iter().find(|f| f.dim() != 2) {
            return Err(Error::InvalidFilter(format!("qubit chain given a filter of dimension {}", f.dim())));
        }
        let paulis = [pauli(0)?, pauli(1)?, pauli(2)?, pauli(3)?];
        Ok(Self { filters, mode, paulis })
    }

    /// `n_bonds` copies of `filter`.
    pub fn identical(filter: FilterOp, n_bonds: usize, mode: Mode) -> Result<Self> {
        Self::new(vec![filter; n_bonds], mode)
    }

    pub fn filters(&self) -> &[FilterOp] {
        &self.filters
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Number of internal nodes *N*.
    pub fn n_nodes(&self) -> usize {
        self.filters.len() - 1
    }

    pub fn n_bonds(&self) -> usize {
        self.filters.len()
    }

    pub(crate) fn sigma(&self, i: usize) -> &ComplexMatrix {
        &self.paulis[i]
    }

    pub fn bond_concurrences(&self) -> Vec<f64> {
        self.filters.iter().map(FilterOp::concurrence).collect()
    }

    fn check_indices(&self, indices: &[usize]) -> Result<()> {
        if indices.len() != self.n_nodes() {
            return Err(Error::OutcomeLength { expected: self.n_nodes(), actual: indices.len() });
        }
        indices.iter().try_for_each(|&i| self.mode.check_label(i))
    }

    /// The end-pair operator for the outcome sequence `indices` (node 1 first).
    pub fn chain_operator(&self, indices: &[usize]) -> Result<ComplexMatrix> {
        self.check_indices(indices)?;
        Ok(self.chain_operator_unchecked(indices))
    }

    fn chain_operator_unchecked(&self, indices: &[usize]) -> ComplexMatrix {
        let links: Vec<&ComplexMatrix> = indices.iter().map(|&i| &self.paulis[i]).collect();
        let m = chain_product(&self.filters, &links);
        match self.mode {
            Mode::Plain => m,
            Mode::Vbs => &self.paulis[3] * &m,
        }
    }

    /// Raw weight ½ Tr(*M M*†).
    pub fn outcome_weight(&self, indices: &[usize]) -> Result<f64> {
        Ok(operator_weight(&self.chain_operator(indices)?))
    }

    /// Every outcome sequence with its weight, probability and concurrence.
    ///
    /// Records are ordered by their little-endian code, so node 1 varies
    /// fastest.
    pub fn enumerate_outcomes(&self) -> Result<TradeoffReport> {
        let n = self.n_nodes();
        let base = self.mode.base();
        let total = outcome_count(base, n);
        if total > ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded { outcomes: total, budget: ENUMERATION_BUDGET });
        }
        let offset = self.mode.first_label();
        let records = (0..total as u64)
            .map(|code| {
                let indices: Vec<usize> = decode(code, base, n).into_iter().map(|d| d + offset).collect();
                let m = self.chain_operator_unchecked(&indices);
                let weight = operator_weight(&m);
                let concurrence = if weight > 0.0 { operator_concurrence(&m) } else { 0.0 };
                OutcomeRecord { indices, code, weight, prob: 0.0, final_op: m, concurrence }
            })
            .collect();
        Ok(TradeoffReport::assemble(self.bond_concurrences(), records))
    }
}

/// ½ Tr(*M M*†) for a 2×2 chain operator.
pub fn operator_weight(m: &ComplexMatrix) -> f64 {
    0.5 * m.frobenius_sqr()
}

/// Concurrence 2|det *M*|/Tr(*M M*†) of the state (*I* ⊗ *M*)∣Φ⁺⟩.
pub fn operator_concurrence(m: &ComplexMatrix) -> f64 {
    let det = m.determinant().expect("chain operators are square");
    (2.0 * det.norm() / m.frobenius_sqr()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{fidelity_up_to_phase, C64};

    fn alpha08() -> FilterOp {
        FilterOp::from_real(&[2.0, 1.0]).unwrap()
    }

    #[test]
    fn pauli_ordering() {
        assert_eq!(pauli(0).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(pauli(3).unwrap(), ComplexMatrix::from_real(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap());
        assert_eq!(pauli(3).unwrap(), &pauli(1).unwrap() * &pauli(2).unwrap());
        for i in 0..4 {
            let s = pauli(i).unwrap();
            assert_eq!(&s * &s.adjoint(), ComplexMatrix::identity(2));
        }
        assert!(pauli(4).is_err());
    }

    #[test]
    fn bell_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let close = |v: &StateVector, e: [f64; 4]| {
            v.amplitudes().iter().zip(e).all(|(a, x)| (a - C64::new(x, 0.0)).norm() < 1e-15)
        };
        assert!(close(&bell_state(Mode::Plain, 0).unwrap(), [h, 0.0, 0.0, h]));
        // (σ3 ⊗ σz)|Φ+⟩ worked by hand: σ3|0⟩ = |1⟩, σ3|1⟩ = −|0⟩, σz|1⟩ = −|1⟩,
        // so (|1⟩|0⟩ + (−|0⟩)(−|1⟩))/√2
        assert!(close(&bell_state(Mode::Vbs, 2).unwrap(), [0.0, h, h, 0.0]));
        assert_eq!(bell_state(Mode::Vbs, 0), Err(Error::SingletExcluded));
        for a in 1..4 {
            for b in 1..4 {
                let g = bell_state(Mode::Vbs, a).unwrap().inner(&bell_state(Mode::Vbs, b).unwrap()).unwrap();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((g - C64::new(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn empty_chain_is_the_bond() {
        let max = FilterOp::from_real(&[1.0, 1.0]).unwrap();
        let chain = SwapChain::new(vec![max], Mode::Vbs).unwrap();
        assert_eq!(chain.chain_operator(&[]).unwrap(), pauli(3).unwrap());
        assert!(chain.chain_operator(&[1]).is_err());
    }

    #[test]
    fn single_swap_operator_by_hand() {
        // T = diag(√1.6, √0.4); σ3 T σz T = σ3 diag(1.6, −0.4)
        let chain = SwapChain::identical(alpha08(), 2, Mode::Vbs).unwrap();
        let m = chain.chain_operator(&[2]).unwrap();
        let expected = ComplexMatrix::from_real(2, 2, &[0.0, 0.4, 1.6, 0.0]).unwrap();
        assert!(m.max_abs_diff(&expected) < 1e-15);
        let weights: Vec<f64> = (1..4).map(|i| chain.outcome_weight(&[i]).unwrap()).collect();
        for (w, e) in weights.iter().zip([0.64, 1.36, 0.64]) {
            assert!((w - e).abs() < 1e-14, "{w} vs {e}");
        }
    }

    #[test]
    fn worked_tradeoff_instance() {
        let chain = SwapChain::identical(alpha08(), 2, Mode::Vbs).unwrap();
        let rep = chain.enumerate_outcomes().unwrap();
        assert_eq!(rep.records.len(), 3);
        assert!((rep.p_sum - 2.64).abs() < 1e-12);
        let expected = [(8.0 / 33.0, 1.0), (17.0 / 33.0, 8.0 / 17.0), (8.0 / 33.0, 1.0)];
        for (r, (p, c)) in rep.records.iter().zip(expected) {
            assert!((r.prob - p).abs() < 1e-12);
            assert!((r.concurrence - c).abs() < 1e-12);
            assert!((r.prob_times_c() - 8.0 / 33.0).abs() < 1e-12);
        }
        assert!((rep.constant - 8.0 / 33.0).abs() < 1e-12);
    }

    #[test]
    fn ideal_swaps() {
        let max = FilterOp::from_real(&[1.0, 1.0]).unwrap();
        let rep = SwapChain::identical(max.clone(), 2, Mode::Vbs).unwrap().enumerate_outcomes().unwrap();
        assert_eq!(rep.records.len(), 3);
        for r in &rep.records {
            assert!((r.prob - 1.0 / 3.0).abs() < 1e-15);
            assert!((r.concurrence - 1.0).abs() < 1e-15);
        }
        let rep = SwapChain::identical(max, 2, Mode::Plain).unwrap().enumerate_outcomes().unwrap();
        assert_eq!(rep.records.len(), 4);
        assert!(rep.records.iter().all(|r| (r.prob - 0.25).abs() < 1e-15 && (r.concurrence - 1.0).abs() < 1e-15));
    }

    #[test]
    fn singular_filter_gives_zero_entanglement() {
        let singular = FilterOp::from_real(&[1.0, 0.0]).unwrap();
        let chain = SwapChain::new(vec![alpha08(), singular, alpha08()], Mode::Vbs).unwrap();
        let rep = chain.enumerate_outcomes().unwrap();
        assert!(rep.records.iter().all(|r| r.weight.is_finite() && r.concurrence == 0.0));
        assert_eq!(rep.constant, 0.0);
        assert!((rep.prob_total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn budget_guard() {
        let chain = SwapChain::identical(alpha08(), 18, Mode::Vbs).unwrap();
        assert!(matches!(chain.enumerate_outcomes(), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn bell_state_matches_operator_state() {
        // the triplet basis state for label i is (I ⊗ σ_i σ3ᵀ)|Φ+⟩
        for i in 1..4 {
            let direct = bell_state(Mode::Vbs, i).unwrap();
            let s3 = pauli(3).unwrap();
            let full = crate::linalg::kron(&s3, &pauli(i).unwrap());
            let phi = bell_state(Mode::Plain, 0).unwrap();
            let applied = phi.apply(&full, &[0, 1]).unwrap();
            assert!((fidelity_up_to_phase(&direct, &applied).unwrap() - 1.0).abs() < 1e-15);
        }
    }
}
