//! The Schur product of operator matrices and the constructions built on it: modulation,
//! kernel smoothing, rank-one matrices and Toeplitz matrices of operator-valued symbols.
//!
//! Blocks compose as operators, so `schur_product(a, b)` and `schur_product(b, a)` differ in
//! general once `d > 1`. Kernel matrices have scalar blocks `c Id` and therefore commute with
//! everything; the smoothing operators act diagonal by diagonal.

use num_complex::Complex64;

use crate::block::{compose_into, OperatorBlock, ZERO};
use crate::error::{Error, Result};
use crate::kernel::{dirac_coefficient, fejer_factor, KernelSpec};
use crate::matrix::{band_columns, BlockMatrix, StructureTag};
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;
use crate::vector::HVector;

/// `(A * B)_kj = T_kj S_kj`, operator composition in every position.
pub fn schur_product(a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
    a.check_same_shape(b)?;
    let (d, n) = (a.dim(), a.size());
    let tag = a.structure().meet(&b.structure(), n);
    let mut out = BlockMatrix::zeros(d, n);
    let (lo, hi) = tag.band(n);
    for k in 1..=n {
        for j in band_columns(k, lo, hi, n) {
            let (x, y) = (a.block_entries(k, j), b.block_entries(k, j));
            compose_into(d, x, y, out.block_mut(k, j));
        }
    }
    Ok(out.with_structure_unchecked(tag))
}

/// `f_A(t) = (e^{i(j-k)t} T_kj)`.
pub fn modulate(a: &BlockMatrix, t: f64) -> BlockMatrix {
    a.weight_diagonals(|l| dirac_coefficient(t, l), a.structure())
}

/// `M_eta = (c(j-k) Id)` for the kernel's coefficient function `c`.
pub fn kernel_matrix(kernel: &KernelSpec, n: usize, dim: usize) -> Result<BlockMatrix> {
    kernel.validate()?;
    if n == 0 || dim == 0 {
        return Err(Error::Precondition(
            "kernel matrix needs positive size and dimension".into(),
        ));
    }
    let full = n as i64 - 1;
    let coeffs = (-full..=full)
        .map(|l| (l, kernel.coefficient(l)))
        .filter(|(_, c)| *c != ZERO)
        .map(|(l, c)| (l, OperatorBlock::scalar(dim, c)))
        .collect();
    Ok(ToeplitzSpec::new(dim, -full, full, coeffs)?.realize(n))
}

/// `sigma_n(A) = M_{K_n} * A`: diagonal `l` scaled by `max(0, 1 - |l|/(n+1))`.
pub fn smooth_fejer(a: &BlockMatrix, order: usize) -> BlockMatrix {
    let tag = match a.structure() {
        StructureTag::Toeplitz => StructureTag::Toeplitz,
        other => other.meet(
            &StructureTag::Banded {
                lo: -(order as i64),
                hi: order as i64,
            },
            a.size(),
        ),
    };
    a.weight_diagonals(|l| Complex64::new(fejer_factor(order, l), 0.0), tag)
}

/// `P_r(A) = M_{P_r} * A`: diagonal `l` scaled by `r^|l|`, full band kept.
pub fn smooth_poisson(a: &BlockMatrix, r: f64) -> Result<BlockMatrix> {
    KernelSpec::poisson(r)?;
    Ok(poisson_weights(a, r))
}

/// Poisson scaling for `r` in `[0, 1)`, with `0^0 = 1`.
pub(crate) fn poisson_weights(a: &BlockMatrix, r: f64) -> BlockMatrix {
    a.weight_diagonals(
        |l| Complex64::new(if l == 0 { 1.0 } else { r.powi(l.unsigned_abs() as i32) }, 0.0),
        a.structure(),
    )
}

/// The matrix of `z -> <<z, x>> y`, with blocks `x_j ⊗ y_k`.
pub fn rank_one_matrix(x: &HVector, y: &HVector) -> Result<BlockMatrix> {
    y.check_shape(x.dim(), x.len())?;
    let (d, n) = (x.dim(), x.len());
    let mut out = BlockMatrix::zeros(d, n);
    for k in 1..=n {
        let yk = y.coord(k);
        for j in 1..=n {
            let xj = x.coord(j);
            let dst = out.block_mut(k, j);
            for r in 0..d {
                for c in 0..d {
                    dst[r * d + c] = yk[r] * xj[c].conj();
                }
            }
        }
    }
    Ok(out)
}

/// `A_f = (f^(j-k))`, the Toeplitz matrix of the symbol's Fourier coefficients.
pub fn toeplitz_from_symbol(f: &SymbolPolynomial, n: usize) -> BlockMatrix {
    f.to_toeplitz().realize(n)
}
