//! Entanglement swapping along chains of filtered valence bonds.
//!
//! A chain of two-party bonds, each squashed by a diagonal local filter, is
//! joined into one long-distance pair by Bell measurements at the internal
//! nodes. This crate computes, exactly, every outcome of that process: the
//! end-pair state, its probability and its entanglement, plus the constant
//! that their product always equals.
//!
//! * [`linalg`]: dense complex matrices, state vectors, partial traces and the
//!   operator ↔ state map (*I* ⊗ *M*)∣Φ⁺⟩.
//! * [`filter`]: filtering operators and bond states.
//! * [`qubit`]: qubit chains in the complete Bell basis (plain mode) or on
//!   spin-1 sites of a valence-bond solid (vbs mode), with a transfer map for
//!   *P*<sub>sum</sub> and an exact outcome sampler.
//! * [`qudit`]: *D*-level chains measured in the Weyl–Heisenberg Bell basis.
//! * [`oracle`]: a brute-force state-vector model of the filtered VBS chain
//!   used to validate the qubit engine.
//!
//! The guide in `book/` walks through the same material with runnable
//! snippets; they are compiled as doc-tests of this crate.

pub mod error;
pub mod filter;
pub mod linalg;
pub mod oracle;
pub mod qubit;
pub mod qudit;
pub mod report;

pub use error::{Error, Result};
pub use filter::{bond_concurrence, bond_state, make_filter, Bond, BondConvention, FilterOp};
pub use linalg::{
    determinant, fidelity_up_to_phase, kron, partial_trace, state_from_operator, ComplexMatrix, StateVector, Tolerance,
    C64,
};
pub use report::{OutcomeRecord, TradeoffReport};

// Book chapters and the README, compiled as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/filters.md")]
    mod filters {}
    #[doc = include_str!("../../../book/src/qubit_swapping.md")]
    mod qubit_swapping {}
    #[doc = include_str!("../../../book/src/transfer.md")]
    mod transfer {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/qudits.md")]
    mod qudits {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
