//! *P*<sub>sum</sub> in O(*N*) by iterating the positive map
//! ρ ↦ Σ<sub>*i*</sub> *T* σ<sub>*i*</sub> ρ σ<sub>*i*</sub>† *T*†.
//!
//! Summing ½ Tr(*M M*†) over all outcome sequences is the same as pushing
//! ρ<sub>0</sub> = *T*<sub>0</sub>*T*<sub>0</sub>† through one map per node and
//! taking ½ Tr at the end (the leading σ<sub>3</sub> of vbs mode is unitary and
//! drops out of the trace). The iterate is renormalized to unit trace each step
//! and the scale carried as a logarithm, so chains of 10<sup>5</sup> bonds do
//! not overflow.

use super::mat2::{self, Mat2};
use super::{Mode, SwapChain};
use crate::filter::FilterOp;
use crate::linalg::C64;

/// Precomputed pieces of one transfer step: the Paulis of the mode and their
/// adjoints.
struct Stepper {
    paulis: Vec<(Mat2, Mat2)>,
}

impl Stepper {
    fn new(chain: &SwapChain) -> Self {
        let paulis = chain
            .mode()
            .labels()
            .map(|i| {
                let s = mat2::from_matrix(chain.sigma(i));
                (s, mat2::adjoint(&s))
            })
            .collect();
        Self { paulis }
    }

    /// Σ_i T σ_i ρ σ_i† T†, renormalized to unit trace; returns ln of the
    /// trace before renormalization.
    fn step(&self, rho: &mut Mat2, filter: &FilterOp) -> f64 {
        let mut acc = mat2::ZERO2;
        for (s, sd) in &self.paulis {
            mat2::add_assign(&mut acc, &mat2::mul(&mat2::mul(s, rho), sd));
        }
        let d = filter.diag();
        for r in 0..2 {
            for c in 0..2 {
                acc[r][c] = d[r] * acc[r][c] * d[c].conj();
            }
        }
        *rho = acc;
        mat2::renormalize(rho)
    }
}

fn initial(filter: &FilterOp) -> (Mat2, f64) {
    let d = filter.diag();
    let zero = C64::new(0.0, 0.0);
    let mut rho = [[C64::new(d[0].norm_sqr(), 0.0), zero], [zero, C64::new(d[1].norm_sqr(), 0.0)]];
    let log_scale = mat2::renormalize(&mut rho);
    (rho, log_scale)
}

/// ln *P*<sub>sum</sub>.
pub fn log_p_sum_transfer(chain: &SwapChain) -> f64 {
    let filters = chain.filters();
    let stepper = Stepper::new(chain);
    let (mut rho, mut log_scale) = initial(&filters[0]);
    for f in &filters[1..] {
        log_scale += stepper.step(&mut rho, f);
    }
    log_scale - std::f64::consts::LN_2
}

/// *P*<sub>sum</sub> = Σ over outcomes of ½ Tr(*M M*†). Overflows to ∞ for
/// very long chains; use [`log_p_sum_transfer`] there.
pub fn p_sum_transfer(chain: &SwapChain) -> f64 {
    log_p_sum_transfer(chain).exp()
}

/// ln *P*<sub>sum</sub> for identical-filter chains with *N* = 0..=`n_max`
/// internal nodes, in one sweep.
pub fn log_p_sum_profile(filter: &FilterOp, mode: Mode, n_max: usize) -> Vec<f64> {
    let chain = SwapChain::identical(filter.clone(), 1, mode).expect("qubit filter");
    let stepper = Stepper::new(&chain);
    let (mut rho, mut log_scale) = initial(filter);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(log_scale - std::f64::consts::LN_2);
    for _ in 0..n_max {
        log_scale += stepper.step(&mut rho, filter);
        out.push(log_scale - std::f64::consts::LN_2);
    }
    out
}

/// Π<sub>*j*</sub> *C<sub>j</sub>* / *P*<sub>sum</sub>, the value of prob·*C* shared
/// by every outcome.
pub fn tradeoff_constant(chain: &SwapChain) -> f64 {
    tradeoff_log_constant(chain).exp()
}

/// ln of [`tradeoff_constant`]; −∞ when a filter is singular.
pub fn tradeoff_log_constant(chain: &SwapChain) -> f64 {
    let log_c: f64 = chain.bond_concurrences().iter().map(|c| c.ln()).sum();
    log_c - log_p_sum_transfer(chain)
}
