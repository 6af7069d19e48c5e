//! Brute-force state-vector oracle for the vbs-mode qubit engine.
//!
//! Each spin-1 site is written as two virtual qubits with the bosonic
//! dictionary a†∣vac⟩ ≡ ∣0⟩, b†∣vac⟩ ≡ ∣1⟩, so a site holds
//! (a†)²/√2 ≡ ∣00⟩, a†b† ≡ (∣01⟩ + ∣10⟩)/√2 and (b†)²/√2 ≡ ∣11⟩. The filtered
//! chain is the product of valence bonds α<sub>*j*</sub>∣01⟩ − β<sub>*j*</sub>∣10⟩
//! on consecutive virtual pairs, with every internal site projected onto its
//! symmetric subspace.
//!
//! Qubit layout for *N* internal sites (2*N* + 2 qubits):
//!
//! ```text
//! qubit:  0 | 1 2 | 3 4 | ... | 2N-1 2N | 2N+1
//! site:   0 |  1  |  2  | ... |    N    | N+1
//! bond:   0---0 1---1 2 ...        N---N
//! ```
//!
//! Measuring internal site *k* means projecting its pair (2*k*−1, 2*k*) onto
//! (σ<sub>3</sub> ⊗ σ<sub>*i<sub>k</sub>*</sub>)∣Φ⁺⟩. Since the built state is
//! normalized, the squared norm left after all projections is the outcome
//! probability itself, directly comparable to the transfer engine's `prob`.

use crate::error::{Error, Result};
use crate::filter::{bond_state, Bond, BondConvention, FilterOp};
use crate::linalg::{fidelity_up_to_phase, state_from_operator, ComplexMatrix, StateVector};
use crate::qubit::{bell_state, Mode, SwapChain};

/// Largest internal-site count `build_vbs_state` accepts (2<sup>18</sup> amplitudes).
pub const MAX_ORACLE_SITES: usize = 8;
/// Largest internal-site count `cross_check` accepts.
pub const MAX_CROSS_CHECK_SITES: usize = 5;

/// Qubit positions of a chain with `n_bonds` valence bonds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteLayout {
    n_bonds: usize,
}

impl SiteLayout {
    pub fn new(n_bonds: usize) -> Self {
        Self { n_bonds }
    }

    pub fn n_bonds(&self) -> usize {
        self.n_bonds
    }

    pub fn n_internal(&self) -> usize {
        self.n_bonds - 1
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.n_bonds
    }

    /// Virtual-qubit pair of internal site `k`, 1 ≤ k ≤ N.
    pub fn site_pair(&self, k: usize) -> (usize, usize) {
        assert!(k >= 1 && k <= self.n_internal(), "internal site {k} out of range");
        (2 * k - 1, 2 * k)
    }

    /// Qubits carried by bond `j`.
    pub fn bond_pair(&self, j: usize) -> (usize, usize) {
        (2 * j, 2 * j + 1)
    }

    /// Qubits of the two end sites.
    pub fn ends(&self) -> (usize, usize) {
        (0, self.n_qubits() - 1)
    }
}

/// Projector onto span{∣00⟩, (∣01⟩ + ∣10⟩)/√2, ∣11⟩}, i.e. (*I* + SWAP)/2.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricProjector {
    matrix: ComplexMatrix,
}

impl SymmetricProjector {
    pub fn new() -> Self {
        let matrix = ComplexMatrix::from_real(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 0.5, 0.5, 0.0, //
                0.0, 0.5, 0.5, 0.0, //
                0.0, 0.0, 0.0, 1.0,
            ],
        )
        .expect("4x4");
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl Default for SymmetricProjector {
    fn default() -> Self {
        Self::new()
    }
}

fn check_sites(filters: &[FilterOp], max: usize) -> Result<usize> {
    let n = filters.len().saturating_sub(1);
    if !(1..=max).contains(&n) {
        return Err(Error::ChainLength { n, min: 1, max });
    }
    if filters.iter().any(|f| f.dim() != 2) {
        return Err(Error::InvalidFilter("the oracle only handles qubit filters".into()));
    }
    Ok(n)
}

/// The unprojected product of valence bonds on 2*N* + 2 qubits.
pub fn bond_product(filters: &[FilterOp]) -> Result<StateVector> {
    let mut state: Option<StateVector> = None;
    for f in filters {
        let bond = bond_state(&Bond::new(f.clone(), BondConvention::Vbs)?);
        state = Some(match state {
            None => bond,
            Some(s) => s.tensor(&bond),
        });
    }
    state.ok_or_else(|| Error::Invalid("no bonds".into()))
}

/// Normalized filtered VBS state with `filters.len() - 1` internal sites.
pub fn build_vbs_state(filters: &[FilterOp]) -> Result<StateVector> {
    let n = check_sites(filters, MAX_ORACLE_SITES)?;
    let layout = SiteLayout::new(n + 1);
    let s = SymmetricProjector::new();
    let mut state = bond_product(filters)?;
    for k in 1..=n {
        let (p, q) = layout.site_pair(k);
        state = state.apply(s.matrix(), &[p, q])?;
    }
    state.normalized()
}

/// Result of measuring every internal site.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    /// Probability of the outcome sequence.
    pub weight: f64,
    /// Normalized state of sites 0 and N+1; `None` when the weight is zero.
    pub end_pair: Option<StateVector>,
}

/// Project internal site *k* onto (σ<sub>3</sub> ⊗ σ<sub>*i<sub>k</sub>*</sub>)∣Φ⁺⟩
/// for every *k*, with `bell_labels[i]` giving the state used for label *i*.
fn measure_with(state: &StateVector, indices: &[usize], bell_labels: &[usize; 4]) -> Result<Measurement> {
    let n_qubits = state.dims().len();
    if n_qubits < 4 || !n_qubits.is_multiple_of(2) || state.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch("not a VBS register".into()));
    }
    let layout = SiteLayout::new(n_qubits / 2);
    if indices.len() != layout.n_internal() {
        return Err(Error::OutcomeLength { expected: layout.n_internal(), actual: indices.len() });
    }
    let mut bra: Option<StateVector> = None;
    for &i in indices {
        let b = bell_state(Mode::Vbs, bell_labels.get(i).copied().unwrap_or(i))?;
        bra = Some(match bra {
            None => b,
            Some(acc) => acc.tensor(&b),
        });
    }
    let bra = bra.expect("at least one internal site");
    let targets: Vec<usize> = (1..n_qubits - 1).collect();
    let residual = state.project(&targets, &bra)?;
    let weight = residual.norm_sqr();
    let end_pair = if weight > 0.0 { Some(residual.normalized()?) } else { None };
    Ok(Measurement { weight, end_pair })
}

/// Bell-measure every internal site of `state` with outcomes `indices`
/// (labels 1..=3, site 1 first).
pub fn measure_internal_sites(state: &StateVector, indices: &[usize]) -> Result<Measurement> {
    measure_with(state, indices, &[0, 1, 2, 3])
}

/// Options for [`cross_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossCheckOptions {
    pub tolerance: f64,
    /// Relabel the oracle's Bell states cyclically (1→2→3→1). A negative
    /// control: the check must then fail.
    pub corrupt_bell_order: bool,
}

impl Default for CrossCheckOptions {
    fn default() -> Self {
        Self { tolerance: 1e-9, corrupt_bell_order: false }
    }
}

/// Comparison of one outcome sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct OutcomeCheck {
    pub indices: Vec<usize>,
    pub oracle_weight: f64,
    pub transfer_prob: f64,
    pub weight_deviation: f64,
    /// Fidelity of the oracle end pair with the transfer end pair; 1 when
    /// both weights vanish.
    pub fidelity: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheckReport {
    pub tolerance: f64,
    pub outcomes: Vec<OutcomeCheck>,
    pub worst_weight_deviation: f64,
    pub worst_fidelity: f64,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Compare every outcome of the transfer engine against the brute-force
/// state vector. Mismatches are reported, not raised.
pub fn cross_check(filters: &[FilterOp], options: CrossCheckOptions) -> Result<CrossCheckReport> {
    check_sites(filters, MAX_CROSS_CHECK_SITES)?;
    let state = build_vbs_state(filters)?;
    let chain = SwapChain::new(filters.to_vec(), Mode::Vbs)?;
    let report = chain.enumerate_outcomes()?;
    let labels = if options.corrupt_bell_order { [0, 2, 3, 1] } else { [0, 1, 2, 3] };
    let tol = options.tolerance;
    let mut outcomes = Vec::with_capacity(report.records.len());
    for rec in &report.records {
        let m = measure_with(&state, &rec.indices, &labels)?;
        let weight_deviation = (m.weight - rec.prob).abs();
        let fidelity = match (&m.end_pair, rec.weight > 0.0) {
            (Some(end), true) => {
                let expected = state_from_operator(&rec.final_op, 2)?.normalized()?;
                fidelity_up_to_phase(end, &expected)?
            }
            (None, false) => 1.0,
            _ => 0.0,
        };
        outcomes.push(OutcomeCheck {
            indices: rec.indices.clone(),
            oracle_weight: m.weight,
            transfer_prob: rec.prob,
            weight_deviation,
            fidelity,
            passed: weight_deviation <= tol && fidelity >= 1.0 - tol,
        });
    }
    let worst_weight_deviation = outcomes.iter().map(|o| o.weight_deviation).fold(0.0, f64::max);
    let worst_fidelity = outcomes.iter().map(|o| o.fidelity).fold(1.0, f64::min);
    Ok(CrossCheckReport { tolerance: tol, outcomes, worst_weight_deviation, worst_fidelity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn alpha08() -> FilterOp {
        FilterOp::from_real(&[2.0, 1.0]).unwrap()
    }

    #[test]
    fn projector_algebra() {
        let s = SymmetricProjector::new();
        let m = s.matrix();
        assert!((m * m).max_abs_diff(m) < 1e-15);
        assert!(m.is_hermitian(0.0));
        assert!((m.trace() - C64::new(3.0, 0.0)).norm() < 1e-15);
        let singlet = bond_state(&Bond::new(FilterOp::from_real(&[1.0, 1.0]).unwrap(), BondConvention::Vbs).unwrap());
        let killed = singlet.apply(m, &[0, 1]).unwrap();
        assert!(killed.norm_sqr() < 1e-30);
    }

    #[test]
    fn triplet_basis_spans_symmetric_subspace() {
        // Σ_i |φ_i⟩⟨φ_i| over the triplet labels reproduces S
        let mut sum = ComplexMatrix::zeros(4, 4);
        for i in 1..4 {
            let v = bell_state(Mode::Vbs, i).unwrap();
            let col = ComplexMatrix::new(4, 1, v.amplitudes().to_vec()).unwrap();
            sum = sum.add(&(&col * &col.adjoint())).unwrap();
        }
        assert!(sum.max_abs_diff(SymmetricProjector::new().matrix()) < 1e-15);
    }

    #[test]
    fn two_bond_state_matches_hand_expansion() {
        // Fock-space expansion of two filtered bonds around site 1, mapped
        // to qubits: a0†b2† a1†b1† carries α0α1, b0†a2† a1†b1† carries β0β1,
        // a0†a2† (b1†)²/√2 carries −√2 α0β1, b0†b2† (a1†)²/√2 carries −√2 α1β0.
        let f = alpha08();
        let (a, b) = (f.alpha(), f.beta());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 16];
        let idx = |q: [usize; 4]| q[0] * 8 + q[1] * 4 + q[2] * 2 + q[3];
        for mid in [[0, 1], [1, 0]] {
            amps[idx([0, mid[0], mid[1], 1])] += a * a * h;
            amps[idx([1, mid[0], mid[1], 0])] += b * b * h;
        }
        amps[idx([0, 1, 1, 0])] += -a * b * sqrt2;
        amps[idx([1, 0, 0, 1])] += -a * b * sqrt2;
        let expected = StateVector::new(vec![2; 4], amps).unwrap().normalized().unwrap();
        let built = build_vbs_state(&[f.clone(), f]).unwrap();
        assert!(built.amplitudes().iter().zip(expected.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
    }

    #[test]
    fn projector_only_removes_singlets() {
        let filters = [alpha08(), FilterOp::from_real(&[1.0, 3.0]).unwrap()];
        let raw = bond_product(&filters).unwrap();
        let s = SymmetricProjector::new();
        let projected = raw.apply(s.matrix(), &[1, 2]).unwrap();
        let removed = raw.apply(&ComplexMatrix::identity(4).sub(s.matrix()).unwrap(), &[1, 2]).unwrap();
        // whatever was removed is a singlet on the site pair
        let singlet_proj = {
            let v = bond_state(&Bond::new(FilterOp::from_real(&[1.0, 1.0]).unwrap(), BondConvention::Vbs).unwrap());
            let col = ComplexMatrix::new(4, 1, v.amplitudes().to_vec()).unwrap();
            &col * &col.adjoint()
        };
        let back = removed.apply(&singlet_proj, &[1, 2]).unwrap();
        assert!(back.amplitudes().iter().zip(removed.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
        let total = projected.amplitudes().iter().zip(removed.amplitudes()).map(|(x, y)| x + y);
        assert!(total.zip(raw.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
        // applying S twice changes nothing
        let again = projected.apply(s.matrix(), &[1, 2]).unwrap();
        assert!(again.amplitudes().iter().zip(projected.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
    }

    #[test]
    fn maximal_single_swap() {
        let max = FilterOp::from_real(&[1.0, 1.0]).unwrap();
        let state = build_vbs_state(&[max.clone(), max]).unwrap();
        let mut total = 0.0;
        for i in 1..4 {
            let m = measure_internal_sites(&state, &[i]).unwrap();
            assert!((m.weight - 1.0 / 3.0).abs() < 1e-15);
            let rho = crate::linalg::partial_trace(&m.end_pair.unwrap(), &[1]).unwrap();
            let c = 2.0 * rho.determinant().unwrap().norm().sqrt();
            assert!((c - 1.0).abs() < 1e-12);
            total += m.weight;
        }
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn worked_weights() {
        let state = build_vbs_state(&[alpha08(), alpha08()]).unwrap();
        let w: Vec<f64> = (1..4).map(|i| measure_internal_sites(&state, &[i]).unwrap().weight).collect();
        for (x, e) in w.iter().zip([8.0 / 33.0, 17.0 / 33.0, 8.0 / 33.0]) {
            assert!((x - e).abs() < 1e-14, "{x} vs {e}");
        }
    }

    #[test]
    fn chain_length_limits() {
        assert!(build_vbs_state(&[alpha08()]).is_err());
        assert!(build_vbs_state(&vec![alpha08(); 10]).is_err());
        assert!(cross_check(&vec![alpha08(); 7], CrossCheckOptions::default()).is_err());
    }

    #[test]
    fn cross_check_and_negative_control() {
        let max = FilterOp::from_real(&[1.0, 1.0]).unwrap();
        let rep = cross_check(
            &[max.clone(), max.clone(), max.clone()],
            CrossCheckOptions { tolerance: 1e-10, corrupt_bell_order: false },
        )
        .unwrap();
        assert_eq!(rep.outcomes.len(), 9);
        assert!(rep.passed());
        assert!(rep.worst_fidelity >= 1.0 - 1e-12);
        let bad = cross_check(
            &[max.clone(), max.clone(), max],
            CrossCheckOptions { tolerance: 1e-10, corrupt_bell_order: true },
        )
        .unwrap();
        assert!(!bad.passed());
    }
}
