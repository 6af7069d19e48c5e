//! Dense complex linear algebra for the small operators and states that the
//! swapping engines pass around.
//!
//! Everything here is row-major and allocation-per-result. Matrices stay at
//! most a few dozen rows wide and state vectors at most 2<sup>18</sup>
//! amplitudes, so there is no attempt at blocking or sparsity.
//!
//! The central correspondence is between an operator *M* on a *D*-level
//! system and the two-party vector (*I* ⊗ *M*)∣Φ⁺⟩, where
//! ∣Φ⁺⟩ = *D*<sup>−1/2</sup> Σ<sub>*j*</sub> ∣*jj*⟩. The amplitude on ∣*j*⟩⊗∣*k*⟩
//! is *M*<sub>*kj*</sub>/√*D*; see [`state_from_operator`].

use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Absolute tolerances used by identity checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// For exact algebraic identities (norms, traces, projector algebra).
    pub exact: f64,
    /// For quantities that go through several matrix products.
    pub composed: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { exact: 1e-12, composed: 1e-10 }
    }
}

/// Dense complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries. Fails on a length mismatch or
    /// any non-finite entry.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        let expected = rows * cols;
        if data.len() != expected {
            return Err(Error::MalformedMatrix { rows, cols, expected, actual: data.len() });
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Build a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: C64) {
        self.data[r * self.cols + c] = value;
    }

    /// Matrix product, failing on incompatible shapes.
    pub fn matmul(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> ComplexMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z.conj()).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    /// Tr(M M†), the squared Frobenius norm.
    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn scale(&self, factor: C64) -> ComplexMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> ComplexMatrix {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.same_shape(rhs)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest entry-wise modulus of `self - rhs`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        if self.same_shape(rhs).is_err() {
            return f64::INFINITY;
        }
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Determinant. The 2×2 case uses `ad - bc`; larger matrices use LU
    /// factorization with partial pivoting.
    pub fn determinant(&self) -> Result<C64> {
        determinant(self)
    }

    fn same_shape(&self, rhs: &ComplexMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        Ok(())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on incompatible shapes; use [`ComplexMatrix::matmul`] to get a
    /// `Result` instead.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("incompatible matrix shapes")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a.data[ar * a.cols + ac];
            for br in 0..b.rows {
                let dst = (ar * b.rows + br) * cols + ac * b.cols;
                let src = &b.data[br * b.cols..(br + 1) * b.cols];
                for (d, &y) in out.data[dst..dst + b.cols].iter_mut().zip(src) {
                    *d = x * y;
                }
            }
        }
    }
    out
}

/// Determinant of a square matrix.
pub fn determinant(m: &ComplexMatrix) -> Result<C64> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    match n {
        0 => Ok(ONE),
        1 => Ok(m.data[0]),
        2 => Ok(m.data[0] * m.data[3] - m.data[1] * m.data[2]),
        _ => {
            let mut a = m.data.clone();
            let mut det = ONE;
            for col in 0..n {
                let pivot = (col..n).max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm())).unwrap();
                if a[pivot * n + col] == ZERO {
                    return Ok(ZERO);
                }
                if pivot != col {
                    for c in 0..n {
                        a.swap(pivot * n + c, col * n + c);
                    }
                    det = -det;
                }
                let p = a[col * n + col];
                det *= p;
                for r in col + 1..n {
                    let f = a[r * n + col] / p;
                    if f == ZERO {
                        continue;
                    }
                    for c in col..n {
                        let v = a[col * n + c];
                        a[r * n + c] -= f * v;
                    }
                }
            }
            Ok(det)
        }
    }
}

/// Pure state of a register of subsystems with the given local dimensions.
/// Subsystem 0 is the most significant digit of the flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("invalid subsystem dims {dims:?}")));
        }
        if amps.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} need {expected} amplitudes, got {}",
                amps.len()
            )));
        }
        if amps.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dims, amps })
    }

    /// Computational basis state ∣digits⟩.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() {
            return Err(Error::DimensionMismatch("basis digits vs dims".into()));
        }
        let mut index = 0;
        for (&d, &dim) in digits.iter().zip(&dims) {
            if d >= dim {
                return Err(Error::OutOfRange { index: d, bound: dim });
            }
            index = index * dim + d;
        }
        let total: usize = dims.iter().product();
        let mut amps = vec![ZERO; total];
        amps[index] = ONE;
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Rescale to unit norm; fails for the zero vector.
    pub fn normalized(&self) -> Result<StateVector> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroOperator);
        }
        Ok(self.scale(C64::new(1.0 / n, 0.0)))
    }

    pub fn scale(&self, factor: C64) -> StateVector {
        Self { dims: self.dims.clone(), amps: self.amps.iter().map(|&z| z * factor).collect() }
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Tensor product ∣self⟩⊗∣other⟩.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Self { dims, amps }
    }

    /// Apply `op` to the listed subsystems (in the listed order), leaving the
    /// rest untouched.
    pub fn apply(&self, op: &ComplexMatrix, targets: &[usize]) -> Result<StateVector> {
        let layout = Layout::new(&self.dims, targets)?;
        if op.rows() != layout.target_size || op.cols() != layout.target_size {
            return Err(Error::DimensionMismatch(format!(
                "operator {}x{} on subsystems of total dimension {}",
                op.rows(),
                op.cols(),
                layout.target_size
            )));
        }
        let mut out = vec![ZERO; self.amps.len()];
        let mut block = vec![ZERO; layout.target_size];
        for rest in 0..layout.rest_size {
            for (t, b) in block.iter_mut().enumerate() {
                *b = self.amps[layout.flat(rest, t)];
            }
            for r in 0..layout.target_size {
                let mut acc = ZERO;
                for (c, &b) in block.iter().enumerate() {
                    acc += op.get(r, c) * b;
                }
                out[layout.flat(rest, r)] = acc;
            }
        }
        Ok(Self { dims: self.dims.clone(), amps: out })
    }

    /// Contract the listed subsystems with ⟨bra∣, returning the unnormalized
    /// state of the remaining subsystems (in ascending order).
    pub fn project(&self, targets: &[usize], bra: &StateVector) -> Result<StateVector> {
        let layout = Layout::new(&self.dims, targets)?;
        let bra_dims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        if bra.dims != bra_dims {
            return Err(Error::DimensionMismatch(format!("projector dims {:?} vs target dims {bra_dims:?}", bra.dims)));
        }
        if layout.rest_dims.is_empty() {
            return Err(Error::Invalid("projection would leave no subsystems".into()));
        }
        let amps = (0..layout.rest_size)
            .map(|rest| bra.amps.iter().enumerate().map(|(t, b)| b.conj() * self.amps[layout.flat(rest, t)]).sum())
            .collect();
        Ok(Self { dims: layout.rest_dims.clone(), amps })
    }
}

/// Index bookkeeping for splitting a register into target and rest parts.
struct Layout {
    strides: Vec<usize>,
    targets: Vec<usize>,
    rest: Vec<usize>,
    dims: Vec<usize>,
    rest_dims: Vec<usize>,
    target_size: usize,
    rest_size: usize,
}

impl Layout {
    fn new(dims: &[usize], targets: &[usize]) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::Invalid("empty subsystem selection".into()));
        }
        let mut seen = vec![false; dims.len()];
        for &t in targets {
            if t >= dims.len() {
                return Err(Error::InvalidSubsystem { index: t, count: dims.len() });
            }
            if seen[t] {
                return Err(Error::Invalid(format!("subsystem {t} listed twice")));
            }
            seen[t] = true;
        }
        let mut strides = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let rest: Vec<usize> = (0..dims.len()).filter(|i| !seen[*i]).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
        Ok(Self {
            strides,
            targets: targets.to_vec(),
            target_size: targets.iter().map(|&t| dims[t]).product(),
            rest_size: rest_dims.iter().product(),
            rest,
            rest_dims,
            dims: dims.to_vec(),
        })
    }

    /// Flat register index for a (rest, target) pair of mixed-radix indices.
    fn flat(&self, mut rest: usize, mut target: usize) -> usize {
        let mut flat = 0;
        for &i in self.targets.iter().rev() {
            flat += (target % self.dims[i]) * self.strides[i];
            target /= self.dims[i];
        }
        for &i in self.rest.iter().rev() {
            flat += (rest % self.dims[i]) * self.strides[i];
            rest /= self.dims[i];
        }
        flat
    }
}

/// Reduced density matrix of the subsystems in `keep` (ordered as listed).
///
/// The input must be normalized within the exact tolerance.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<ComplexMatrix> {
    let ns = state.norm_sqr();
    if (ns - 1.0).abs() > Tolerance::default().exact {
        return Err(Error::NotNormalized(ns));
    }
    let layout = Layout::new(&state.dims, keep)?;
    let k = layout.target_size;
    let mut rho = ComplexMatrix::zeros(k, k);
    // with no traced subsystems, rest_size is 1 and this is |ψ⟩⟨ψ|
    for rest in 0..layout.rest_size {
        for r in 0..k {
            let a = state.amps[layout.flat(rest, r)];
            if a == ZERO {
                continue;
            }
            for c in 0..k {
                let b = state.amps[layout.flat(rest, c)];
                rho.data[r * k + c] += a * b.conj();
            }
        }
    }
    Ok(rho)
}

/// The unnormalized two-party vector (*I* ⊗ `m`)∣Φ⁺⟩ on a `dim` × `dim`
/// register. Its squared norm is Tr(*M M*†)/*D*.
pub fn state_from_operator(m: &ComplexMatrix, dim: usize) -> Result<StateVector> {
    if m.rows != dim || m.cols != dim {
        return Err(Error::DimensionMismatch(format!("expected a {dim}x{dim} operator, got {}x{}", m.rows, m.cols)));
    }
    let s = 1.0 / (dim as f64).sqrt();
    let mut amps = vec![ZERO; dim * dim];
    for j in 0..dim {
        for k in 0..dim {
            amps[j * dim + k] = m.get(k, j) * s;
        }
    }
    StateVector::new(vec![dim, dim], amps)
}

/// |⟨u|v⟩|² for normalized states; 1 exactly when they agree up to a global
/// phase.
pub fn fidelity_up_to_phase(u: &StateVector, v: &StateVector) -> Result<f64> {
    let overlap = u.inner(v)?;
    Ok(overlap.norm_sqr().min(1.0))
}
