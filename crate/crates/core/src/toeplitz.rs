//! Banded Toeplitz data `T_{k,j} = T_{j-k}` that can be realized at any truncation size.

use std::collections::BTreeMap;

use crate::block::OperatorBlock;
use crate::error::{Error, Result};
use crate::matrix::{diagonal_positions, BlockMatrix, StructureTag};

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzSpec {
    dim: usize,
    lo: i64,
    hi: i64,
    coeffs: BTreeMap<i64, OperatorBlock>,
}

impl ToeplitzSpec {
    /// Coefficients outside `lo..=hi` are rejected; offsets inside the band without a
    /// coefficient are zero.
    pub fn new(dim: usize, lo: i64, hi: i64, coeffs: BTreeMap<i64, OperatorBlock>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("block dimension must be positive".into()));
        }
        if lo > hi {
            return Err(Error::Precondition(format!("empty band {lo}..{hi}")));
        }
        for (&l, b) in &coeffs {
            if l < lo || l > hi {
                return Err(Error::Precondition(format!("coefficient {l} outside band {lo}..{hi}")));
            }
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: b.dim(),
                });
            }
        }
        Ok(Self { dim, lo, hi, coeffs })
    }

    /// Band taken as the span of the given offsets.
    pub fn from_coefficients(dim: usize, coeffs: BTreeMap<i64, OperatorBlock>) -> Result<Self> {
        let lo = coeffs.keys().next().copied().unwrap_or(0);
        let hi = coeffs.keys().next_back().copied().unwrap_or(0);
        Self::new(dim, lo, hi, coeffs)
    }

    /// Reads the diagonals of a Toeplitz-tagged matrix back into coefficients; zero
    /// diagonals are dropped.
    pub fn from_matrix(a: &BlockMatrix) -> Result<Self> {
        if a.structure() != StructureTag::Toeplitz {
            a.verify_structure(StructureTag::Toeplitz)?;
        }
        let n = a.size() as i64;
        let mut coeffs = BTreeMap::new();
        for l in -(n - 1)..=(n - 1) {
            let (k, j) = diagonal_positions(a.size(), l).next().expect("diagonal is nonempty");
            let b = a.block(k, j);
            if !b.is_zero() {
                coeffs.insert(l, b);
            }
        }
        Self::new(a.dim(), -(n - 1), n - 1, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn band(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn coefficients(&self) -> &BTreeMap<i64, OperatorBlock> {
        &self.coeffs
    }

    /// `T_l`, zero outside the band.
    pub fn coeff(&self, l: i64) -> OperatorBlock {
        self.coeffs
            .get(&l)
            .cloned()
            .unwrap_or_else(|| OperatorBlock::zeros(self.dim))
    }

    /// The leading `n x n` corner of the Toeplitz matrix.
    pub fn realize(&self, n: usize) -> BlockMatrix {
        assert!(n >= 1, "truncation size must be positive");
        let mut m = BlockMatrix::zeros(self.dim, n);
        for (&l, b) in &self.coeffs {
            if l.unsigned_abs() as usize >= n {
                continue;
            }
            for (k, j) in diagonal_positions(n, l) {
                m.put(k, j, b.entries());
            }
        }
        m.with_structure_unchecked(StructureTag::Toeplitz)
    }
}

/// Free-function form of [`ToeplitzSpec::realize`].
pub fn realize_toeplitz(spec: &ToeplitzSpec, n: usize) -> BlockMatrix {
    spec.realize(n)
}
