//! Operator entries: dense `d x d` complex matrices standing for elements of `B(H)`, `H = C^d`.
//!
//! Entries are stored row-major. Indices inside a block are 0-based; they address
//! coordinates of `C^d`, not positions in a block matrix.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBlock {
    dim: usize,
    entries: Vec<Complex64>,
}

impl OperatorBlock {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "block dimension must be positive");
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, ONE)
    }

    /// `c * Id`.
    pub fn scalar(dim: usize, c: Complex64) -> Self {
        let mut b = Self::zeros(dim);
        for r in 0..dim {
            b.entries[r * dim + r] = c;
        }
        b
    }

    /// Builds a block from row-major entries, rejecting wrong counts and NaN/Inf.
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("block dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                dim,
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { value: bad.to_string() });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut b = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                b.entries[r * dim + c] = f(r, c);
            }
        }
        b
    }

    /// The rank-one operator `z -> <z, x> y`, i.e. the matrix `y x^*`.
    pub fn rank_one(x: &[Complex64], y: &[Complex64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                actual: y.len(),
            });
        }
        let dim = x.len();
        Ok(Self::from_fn(dim, |r, c| y[r] * x[c].conj()))
    }

    pub(crate) fn from_slice(dim: usize, entries: &[Complex64]) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self {
            dim,
            entries: entries.to_vec(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == ZERO)
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &OperatorBlock) -> OperatorBlock {
        assert_eq!(self.dim, other.dim, "composing blocks of different dimension");
        let mut out = vec![ZERO; self.dim * self.dim];
        compose_into(self.dim, &self.entries, &other.entries, &mut out);
        OperatorBlock {
            dim: self.dim,
            entries: out,
        }
    }

    pub fn adjoint(&self) -> OperatorBlock {
        let d = self.dim;
        Self::from_fn(d, |r, c| self.entries[c * d + r].conj())
    }

    pub fn scale(&self, c: Complex64) -> OperatorBlock {
        OperatorBlock {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length differs from block dimension");
        let d = self.dim;
        (0..d)
            .map(|r| self.entries[r * d..(r + 1) * d].iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Largest singular value.
    pub fn op_norm(&self) -> f64 {
        block_op_norm(self.dim, &self.entries)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &OperatorBlock) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `out = a * b` for row-major `d x d` slices.
pub(crate) fn compose_into(d: usize, a: &[Complex64], b: &[Complex64], out: &mut [Complex64]) {
    if d == 1 {
        out[0] = a[0] * b[0];
        return;
    }
    for r in 0..d {
        for c in 0..d {
            let mut acc = ZERO;
            for m in 0..d {
                acc += a[r * d + m] * b[m * d + c];
            }
            out[r * d + c] = acc;
        }
    }
}

/// Largest singular value of a row-major `d x d` slice.
pub(crate) fn block_op_norm(d: usize, entries: &[Complex64]) -> f64 {
    if d == 1 {
        return entries[0].norm();
    }
    if entries.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    let m = DMatrix::from_row_slice(d, d, entries);
    m.singular_values().iter().cloned().fold(0.0, f64::max)
}

impl Add for &OperatorBlock {
    type Output = OperatorBlock;

    fn add(self, rhs: &OperatorBlock) -> OperatorBlock {
        assert_eq!(self.dim, rhs.dim);
        OperatorBlock {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &OperatorBlock {
    type Output = OperatorBlock;

    fn sub(self, rhs: &OperatorBlock) -> OperatorBlock {
        assert_eq!(self.dim, rhs.dim);
        OperatorBlock {
            dim: self.dim,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &OperatorBlock {
    type Output = OperatorBlock;

    fn neg(self) -> OperatorBlock {
        self.scale(-ONE)
    }
}

impl Mul for &OperatorBlock {
    type Output = OperatorBlock;

    fn mul(self, rhs: &OperatorBlock) -> OperatorBlock {
        self.compose(rhs)
    }
}
