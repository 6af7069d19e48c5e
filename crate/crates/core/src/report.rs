//! Outcome tables shared by the qubit and qudit engines.

use crate::linalg::ComplexMatrix;

/// Characters used to render one measurement digit. Digits up to 63 cover
/// the qudit alphabet for *D* ≤ 8.
const DIGITS: &[u8; 64] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ+/";

/// One measurement-outcome sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeRecord {
    /// Per-node outcome labels, node 1 first. Qubit chains use the Pauli
    /// label *i*; qudit chains use *m* + *D n*.
    pub indices: Vec<usize>,
    /// Little-endian integer code of `indices` in the engine's base.
    pub code: u64,
    /// Raw weight, the squared norm of the unnormalized end-pair state.
    pub weight: f64,
    /// `weight / p_sum`.
    pub prob: f64,
    /// The chain operator *M* with end pair ∝ (*I* ⊗ *M*)∣Φ⁺⟩.
    pub final_op: ComplexMatrix,
    /// Entanglement of the end pair; 0 for zero-weight outcomes.
    pub concurrence: f64,
}

impl OutcomeRecord {
    pub fn prob_times_c(&self) -> f64 {
        self.prob * self.concurrence
    }

    /// Comma-free rendering of `indices`, node 1 first.
    pub fn label(&self) -> String {
        render_label(&self.indices)
    }
}

pub fn render_label(indices: &[usize]) -> String {
    indices.iter().map(|&i| DIGITS[i] as char).collect()
}

/// Full outcome table of a chain together with its trade-off summary.
#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffReport {
    /// Π C<sub>j</sub> / P<sub>sum</sub>.
    pub constant: f64,
    pub p_sum: f64,
    pub bond_concurrences: Vec<f64>,
    pub records: Vec<OutcomeRecord>,
    /// max |prob·C − constant| over outcomes with non-zero weight.
    pub max_residual: f64,
    /// max |weight·C − Π C<sub>j</sub>| over outcomes with non-zero weight.
    pub max_weight_residual: f64,
}

impl TradeoffReport {
    pub(crate) fn assemble(bond_concurrences: Vec<f64>, mut records: Vec<OutcomeRecord>) -> Self {
        let p_sum: f64 = records.iter().map(|r| r.weight).sum();
        let product: f64 = bond_concurrences.iter().product();
        let constant = product / p_sum;
        let mut max_residual: f64 = 0.0;
        let mut max_weight_residual: f64 = 0.0;
        for r in &mut records {
            r.prob = r.weight / p_sum;
            if r.weight > 0.0 {
                max_residual = max_residual.max((r.prob * r.concurrence - constant).abs());
                max_weight_residual = max_weight_residual.max((r.weight * r.concurrence - product).abs());
            }
        }
        Self { constant, p_sum, bond_concurrences, records, max_residual, max_weight_residual }
    }

    /// Π C<sub>j</sub>.
    pub fn concurrence_product(&self) -> f64 {
        self.bond_concurrences.iter().product()
    }

    pub fn prob_total(&self) -> f64 {
        self.records.iter().map(|r| r.prob).sum()
    }
}
