//! Swapping chains of *D*-level bonds.
//!
//! The shift *X* = Σ ∣*j*+1 mod *D*⟩⟨*j*∣ and clock *Z* = Σ ω<sup>*j*</sup>∣*j*⟩⟨*j*∣,
//! ω = e<sup>2π*i*/*D*</sup>, generate the Weyl–Heisenberg operators
//! *U<sub>mn</sub>* = *X<sup>m</sup>Z<sup>n</sup>*. The states (*I* ⊗ *U<sub>mn</sub>*)∣Φ⁺⟩
//! form a complete orthonormal Bell basis, so every internal node has *D*²
//! outcomes and the end pair after outcomes (*m<sub>k</sub>*, *n<sub>k</sub>*) is
//! (*I* ⊗ *M*)∣Φ⁺⟩ with
//! *M* = *T<sub>N</sub> U*<sub>*m<sub>N</sub>n<sub>N</sub>*</sub> ⋯ *U*<sub>*m*<sub>1</sub>*n*<sub>1</sub></sub> *T*<sub>0</sub>.
//!
//! Outcomes are recorded by the pair as it appears inside *M* (the swap
//! identity distributes the measured partner state as ∣Φ<sub>*m*,−*n*</sub>⟩;
//! only the operator product enters any observable). Each node's pair is
//! packed into the digit *m* + *D n*, which for *D* = 2 coincides with the
//! qubit Pauli label: (0,0) ↦ *I*, (1,0) ↦ σ<sub>*x*</sub>, (0,1) ↦ σ<sub>*z*</sub>,
//! (1,1) ↦ σ<sub>*x*</sub>σ<sub>*z*</sub>.
//!
//! Entanglement is measured by the generalized concurrence
//! *D*·(det ρ)<sup>1/*D*</sup> of the reduced state, which for the pair
//! (*I* ⊗ *M*)∣Φ⁺⟩ is |det *M*|<sup>2/*D*</sup> / (Tr(*MM*†)/*D*).
//! Since |det *U<sub>mn</sub>*| = 1, the raw weight *P* = Tr(*MM*†)/*D* obeys
//! *P*·*C*<sup>e</sup> = Π<sub>*k*</sub> *C*<sup>e</sup><sub>*k*</sub>.

use crate::error::{Error, Result};
use crate::filter::FilterOp;
use crate::linalg::{state_from_operator, ComplexMatrix, StateVector, C64};
use crate::qubit::{chain_product, decode, outcome_count};
use crate::report::{OutcomeRecord, TradeoffReport};

/// Largest outcome count `enumerate_qudit_outcomes` will walk.
pub const QUDIT_ENUMERATION_BUDGET: u128 = 10_000_000;

/// ω<sup>k</sup> for ω = e<sup>2π*i*/*D*</sup>, exact at multiples of a quarter turn.
pub fn omega_power(dim: usize, k: usize) -> C64 {
    let k = k % dim;
    if (4 * k).is_multiple_of(dim) {
        return match 4 * k / dim {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / dim as f64)
}

/// The Weyl–Heisenberg operator *U<sub>mn</sub>* = *X<sup>m</sup>Z<sup>n</sup>*.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOp {
    dim: usize,
    m: usize,
    n: usize,
    matrix: ComplexMatrix,
}

impl WeylOp {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shift(&self) -> usize {
        self.m
    }

    pub fn clock(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn omega(&self) -> C64 {
        omega_power(self.dim, 1)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(2..=8).contains(&dim) {
        return Err(Error::Invalid(format!("qudit dimension {dim} outside 2..=8")));
    }
    Ok(())
}

/// *X<sup>m</sup>Z<sup>n</sup>* in dimension `dim`.
pub fn gen_pauli(dim: usize, m: usize, n: usize) -> Result<WeylOp> {
    check_dim(dim)?;
    for v in [m, n] {
        if v >= dim {
            return Err(Error::OutOfRange { index: v, bound: dim });
        }
    }
    let mut x = ComplexMatrix::zeros(dim, dim);
    for j in 0..dim {
        x.set((j + 1) % dim, j, C64::new(1.0, 0.0));
    }
    let z = ComplexMatrix::from_diag(&(0..dim).map(|j| omega_power(dim, j)).collect::<Vec<_>>());
    let mut u = ComplexMatrix::identity(dim);
    for _ in 0..m {
        u = &u * &x;
    }
    for _ in 0..n {
        u = &u * &z;
    }
    Ok(WeylOp { dim, m, n, matrix: u })
}

/// (*I* ⊗ *U<sub>mn</sub>*)∣Φ⁺⟩.
pub fn qudit_bell(dim: usize, m: usize, n: usize) -> Result<StateVector> {
    state_from_operator(gen_pauli(dim, m, n)?.matrix(), dim)
}

/// Generalized concurrence of (*I* ⊗ `m`)∣Φ⁺⟩.
pub fn gen_concurrence(m: &ComplexMatrix, dim: usize) -> Result<f64> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::DimensionMismatch(format!("expected {dim}x{dim}, got {}x{}", m.rows(), m.cols())));
    }
    let fro = m.frobenius_sqr();
    if fro == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let d = dim as f64;
    let det = m.determinant()?.norm();
    Ok((det.powf(2.0 / d) / (fro / d)).min(1.0))
}

/// A chain of *N* + 1 filtered *D*-level bonds.
#[derive(Clone, Debug, PartialEq)]
pub struct QuditChain {
    dim: usize,
    filters: Vec<FilterOp>,
    weyl: Vec<ComplexMatrix>,
}

impl QuditChain {
    pub fn new(filters: Vec<FilterOp>) -> Result<Self> {
        let dim = filters.first().ok_or_else(|| Error::Invalid("a chain needs at least one bond".into()))?.dim();
        check_dim(dim)?;
        if filters.iter().any(|f| f.dim() != dim) {
            return Err(Error::DimensionMismatch("all filters of a chain must share one dimension".into()));
        }
        // digit d = m + D n
        let weyl = (0..dim * dim).map(|d| gen_pauli(dim, d % dim, d / dim).map(|w| w.matrix)).collect::<Result<_>>()?;
        Ok(Self { dim, filters, weyl })
    }

    pub fn identical(filter: FilterOp, n_bonds: usize) -> Result<Self> {
        Self::new(vec![filter; n_bonds])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn filters(&self) -> &[FilterOp] {
        &self.filters
    }

    pub fn n_nodes(&self) -> usize {
        self.filters.len() - 1
    }

    pub fn bond_concurrences(&self) -> Vec<f64> {
        self.filters.iter().map(FilterOp::concurrence).collect()
    }

    /// *T<sub>N</sub> U<sub>m<sub>N</sub>n<sub>N</sub></sub>* ⋯ *U<sub>m<sub>1</sub>n<sub>1</sub></sub> T*<sub>0</sub>.
    pub fn chain_operator(&self, outcome: &[(usize, usize)]) -> Result<ComplexMatrix> {
        if outcome.len() != self.n_nodes() {
            return Err(Error::OutcomeLength { expected: self.n_nodes(), actual: outcome.len() });
        }
        let mut digits = Vec::with_capacity(outcome.len());
        for &(m, n) in outcome {
            for v in [m, n] {
                if v >= self.dim {
                    return Err(Error::OutOfRange { index: v, bound: self.dim });
                }
            }
            digits.push(m + self.dim * n);
        }
        Ok(self.operator_for_digits(&digits))
    }

    fn operator_for_digits(&self, digits: &[usize]) -> ComplexMatrix {
        let links: Vec<&ComplexMatrix> = digits.iter().map(|&d| &self.weyl[d]).collect();
        chain_product(&self.filters, &links)
    }

    /// Raw weight Tr(*MM*†)/*D*.
    pub fn outcome_weight(&self, outcome: &[(usize, usize)]) -> Result<f64> {
        Ok(self.chain_operator(outcome)?.frobenius_sqr() / self.dim as f64)
    }

    /// All *D*<sup>2*N*</sup> outcomes in little-endian code order.
    pub fn enumerate_outcomes(&self) -> Result<TradeoffReport> {
        let n = self.n_nodes();
        let base = self.dim * self.dim;
        let total = outcome_count(base, n);
        if total > QUDIT_ENUMERATION_BUDGET {
            return Err(Error::BudgetExceeded { outcomes: total, budget: QUDIT_ENUMERATION_BUDGET });
        }
        let records = (0..total as u64)
            .map(|code| {
                let indices = decode(code, base, n);
                let m = self.operator_for_digits(&indices);
                let weight = m.frobenius_sqr() / self.dim as f64;
                let concurrence = if weight > 0.0 { gen_concurrence(&m, self.dim).unwrap_or(0.0) } else { 0.0 };
                OutcomeRecord { indices, code, weight, prob: 0.0, final_op: m, concurrence }
            })
            .collect();
        Ok(TradeoffReport::assemble(self.bond_concurrences(), records))
    }
}

/// Split a qudit digit into its (*m*, *n*) pair.
pub fn digit_pair(dim: usize, digit: usize) -> (usize, usize) {
    (digit % dim, digit / dim)
}

/// [`QuditChain::chain_operator`] under its operation name.
pub fn qudit_chain_operator(chain: &QuditChain, outcome: &[(usize, usize)]) -> Result<ComplexMatrix> {
    chain.chain_operator(outcome)
}

/// [`QuditChain::enumerate_outcomes`] under its operation name.
pub fn enumerate_qudit_outcomes(chain: &QuditChain) -> Result<TradeoffReport> {
    chain.enumerate_outcomes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ZERO;
    use crate::qubit::pauli;

    #[test]
    fn qubit_reduction() {
        assert_eq!(gen_pauli(2, 0, 0).unwrap().matrix(), &ComplexMatrix::identity(2));
        assert_eq!(gen_pauli(2, 1, 0).unwrap().matrix(), &pauli(1).unwrap());
        assert_eq!(gen_pauli(2, 0, 1).unwrap().matrix(), &pauli(2).unwrap());
        assert_eq!(gen_pauli(2, 1, 1).unwrap().matrix(), &pauli(3).unwrap());
    }

    #[test]
    fn qutrit_shift_is_cyclic() {
        let x = gen_pauli(3, 1, 0).unwrap();
        let expected = ComplexMatrix::from_real(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(x.matrix(), &expected);
    }

    #[test]
    fn range_errors() {
        assert!(gen_pauli(3, 3, 0).is_err());
        assert!(gen_pauli(3, 0, 5).is_err());
        assert!(gen_pauli(1, 0, 0).is_err());
        assert!(qudit_bell(4, 0, 4).is_err());
    }

    #[test]
    fn omega_quarter_turns_exact() {
        assert_eq!(omega_power(2, 1), C64::new(-1.0, 0.0));
        assert_eq!(omega_power(4, 1), C64::new(0.0, 1.0));
        assert_eq!(omega_power(4, 3), C64::new(0.0, -1.0));
        assert!((omega_power(3, 1) - C64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn empty_chain_is_the_filter() {
        let f = FilterOp::from_real(&[1.0, 2.0, 3.0]).unwrap();
        let chain = QuditChain::new(vec![f.clone()]).unwrap();
        assert_eq!(chain.chain_operator(&[]).unwrap(), f.matrix());
        assert!(chain.chain_operator(&[(0, 0)]).is_err());
    }

    #[test]
    fn gen_concurrence_examples() {
        assert!((gen_concurrence(&ComplexMatrix::identity(3), 3).unwrap() - 1.0).abs() < 1e-15);
        let singular = ComplexMatrix::from_diag(&[C64::new(1.0, 0.0), ZERO, C64::new(1.0, 0.0)]);
        assert_eq!(gen_concurrence(&singular, 3).unwrap(), 0.0);
        assert_eq!(gen_concurrence(&ComplexMatrix::zeros(2, 2), 2), Err(Error::ZeroOperator));
    }

    #[test]
    fn maximal_qutrit_chain() {
        let chain = QuditChain::identical(FilterOp::from_real(&[1.0, 1.0, 1.0]).unwrap(), 2).unwrap();
        let rep = chain.enumerate_outcomes().unwrap();
        assert_eq!(rep.records.len(), 9);
        for r in &rep.records {
            assert!((r.prob - 1.0 / 9.0).abs() < 1e-15);
            assert!((r.concurrence - 1.0).abs() < 1e-12);
            assert!((r.weight - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn budget_guard() {
        let chain = QuditChain::identical(FilterOp::from_real(&[1.0, 1.0, 1.0]).unwrap(), 9).unwrap();
        assert!(matches!(chain.enumerate_outcomes(), Err(Error::BudgetExceeded { .. })));
    }
}
