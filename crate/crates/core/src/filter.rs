//! Local filtering operators and the bond states they produce.
//!
//! A filter is a diagonal operator *T* = diag(λ<sub>0</sub>, …, λ<sub>*D*−1</sub>).
//! Applied to one half of ∣Φ⁺⟩ it yields the bond (*I* ⊗ *T*)∣Φ⁺⟩. Whatever
//! prefactor the caller has in mind, the stored diagonal is always rescaled so
//! that Σ|λ<sub>*j*</sub>|² = *D*, which makes the bond state unit-norm. All
//! probabilities downstream come from norms, so no prefactor convention leaks
//! into the results.
//!
//! For qubits the amplitudes α = λ<sub>0</sub>/√2 and β = λ<sub>1</sub>/√2
//! satisfy |α|² + |β|² = 1 and the bond is α∣00⟩ + β∣11⟩.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{state_from_operator, ComplexMatrix, StateVector, C64};

/// Diagonal local filtering operator, stored bond-normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterOp {
    diag: Vec<C64>,
    scale: f64,
}

impl FilterOp {
    /// Rescale `diag` so that Σ|λ|² equals its length. Needs at least two
    /// finite entries, not all zero.
    pub fn new(diag: &[C64]) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::InvalidFilter(format!(
                "a filter needs at least 2 diagonal entries, got {}",
                diag.len()
            )));
        }
        if diag.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidFilter("non-finite diagonal entry".into()));
        }
        let total: f64 = diag.iter().map(|z| z.norm_sqr()).sum();
        if total == 0.0 {
            return Err(Error::InvalidFilter("all-zero diagonal has no bond state".into()));
        }
        let scale = (diag.len() as f64 / total).sqrt();
        Ok(Self { diag: diag.iter().map(|&z| z * scale).collect(), scale })
    }

    pub fn from_real(diag: &[f64]) -> Result<Self> {
        Self::new(&diag.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// Random filter with entry moduli in `[min_modulus, 1]` and uniform
    /// phases, then normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dim: usize, min_modulus: f64) -> Self {
        let diag: Vec<C64> = (0..dim)
            .map(|_| {
                let r = rng.random_range(min_modulus..=1.0);
                C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self::new(&diag).expect("random filter entries are finite and non-zero")
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Normalized diagonal entries.
    pub fn diag(&self) -> &[C64] {
        &self.diag
    }

    /// Factor by which the caller's diagonal was multiplied.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Qubit bond amplitude α = λ<sub>0</sub>/√D.
    pub fn alpha(&self) -> C64 {
        self.diag[0] / (self.dim() as f64).sqrt()
    }

    /// Qubit bond amplitude β = λ<sub>1</sub>/√D.
    pub fn beta(&self) -> C64 {
        self.diag[1] / (self.dim() as f64).sqrt()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_diag(&self.diag)
    }

    /// `T · m`, scaling row *r* of `m` by λ<sub>*r*</sub>.
    pub fn apply_left(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut out = m.clone();
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, self.diag[r] * m.get(r, c));
            }
        }
        out
    }

    /// |det T|, the product of the entry moduli.
    pub fn abs_det(&self) -> f64 {
        self.diag.iter().map(|z| z.norm()).product()
    }

    /// Entanglement of the bond, *D*·|det T|<sup>2/*D*</sup>/Tr(*TT*†).
    /// 1 for a maximal filter, 0 for a singular one.
    pub fn concurrence(&self) -> f64 {
        let d = self.dim() as f64;
        let tr: f64 = self.diag.iter().map(|z| z.norm_sqr()).sum();
        (d * self.abs_det().powf(2.0 / d) / tr).min(1.0)
    }
}

/// [`FilterOp::new`] under its operation name.
pub fn make_filter(diag: &[C64]) -> Result<FilterOp> {
    FilterOp::new(diag)
}

/// How a filter is turned into a bond state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BondConvention {
    /// (*I* ⊗ *T*)∣Φ⁺⟩ = α∣00⟩ + β∣11⟩.
    Plain,
    /// (*I* ⊗ σ<sub>3</sub>*T*)∣Φ⁺⟩ = α∣01⟩ − β∣10⟩, the valence bond
    /// α a†<sub>j</sub>b†<sub>j+1</sub> − β b†<sub>j</sub>a†<sub>j+1</sub>. Qubits only.
    Vbs,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bond {
    filter: FilterOp,
    convention: BondConvention,
}

impl Bond {
    pub fn new(filter: FilterOp, convention: BondConvention) -> Result<Self> {
        if convention == BondConvention::Vbs && filter.dim() != 2 {
            return Err(Error::InvalidFilter(format!("vbs bonds are qubit bonds, got dimension {}", filter.dim())));
        }
        Ok(Self { filter, convention })
    }

    pub fn filter(&self) -> &FilterOp {
        &self.filter
    }

    pub fn convention(&self) -> BondConvention {
        self.convention
    }

    /// The operator *A* with bond = (*I* ⊗ *A*)∣Φ⁺⟩.
    pub fn operator(&self) -> ComplexMatrix {
        match self.convention {
            BondConvention::Plain => self.filter.matrix(),
            BondConvention::Vbs => {
                let s3 = crate::qubit::pauli(3).expect("σ3 exists");
                &s3 * &self.filter.matrix()
            }
        }
    }
}

/// Normalized two-party bond state.
pub fn bond_state(bond: &Bond) -> StateVector {
    state_from_operator(&bond.operator(), bond.filter.dim())
        .expect("bond operator is square with the filter's dimension")
}

pub fn bond_concurrence(bond: &Bond) -> f64 {
    bond.filter.concurrence()
}
