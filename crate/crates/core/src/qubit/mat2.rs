//! Stack-allocated 2×2 complex arithmetic for the per-node inner loops.

use crate::linalg::{ComplexMatrix, C64};

pub(crate) type Mat2 = [[C64; 2]; 2];

pub(crate) const ZERO2: Mat2 = [[C64::new(0.0, 0.0); 2]; 2];

pub(crate) fn from_matrix(m: &ComplexMatrix) -> Mat2 {
    [[m.get(0, 0), m.get(0, 1)], [m.get(1, 0), m.get(1, 1)]]
}

pub(crate) fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = ZERO2;
    for (r, row) in out.iter_mut().enumerate() {
        for (c, x) in row.iter_mut().enumerate() {
            *x = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub(crate) fn adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub(crate) fn add_assign(acc: &mut Mat2, x: &Mat2) {
    for r in 0..2 {
        for c in 0..2 {
            acc[r][c] += x[r][c];
        }
    }
}

/// a ρ a†
pub(crate) fn sandwich(a: &Mat2, rho: &Mat2) -> Mat2 {
    mul(&mul(a, rho), &adjoint(a))
}

pub(crate) fn trace(a: &Mat2) -> f64 {
    (a[0][0] + a[1][1]).re
}

/// Tr(a b)
pub(crate) fn trace_product(a: &Mat2, b: &Mat2) -> f64 {
    (a[0][0] * b[0][0] + a[0][1] * b[1][0] + a[1][0] * b[0][1] + a[1][1] * b[1][1]).re
}

/// Divide by the trace in place and return its logarithm.
pub(crate) fn renormalize(rho: &mut Mat2) -> f64 {
    let t = trace(rho);
    for row in rho.iter_mut() {
        for x in row.iter_mut() {
            *x /= t;
        }
    }
    t.ln()
}
