//! `N x N` truncations of matrices with operator entries.
//!
//! The public API indexes block positions 1-based (`k, j` in `1..=N`). Storage is a flat
//! block-major buffer: block `(k, j)` occupies `d*d` consecutive row-major entries.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::block::{block_op_norm, OperatorBlock, ZERO};
use crate::error::{Error, Result};
use crate::vector::HVector;

/// Structural claim attached to a matrix. Verified whenever a tag is asserted on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureTag {
    Dense,
    Toeplitz,
    UpperTriangular,
    /// Nonzero blocks only on diagonals `lo ..= hi`, where diagonal `l` holds the blocks `(k, k+l)`.
    Banded {
        lo: i64,
        hi: i64,
    },
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureTag::Dense => write!(f, "dense"),
            StructureTag::Toeplitz => write!(f, "toeplitz"),
            StructureTag::UpperTriangular => write!(f, "upper_triangular"),
            StructureTag::Banded { lo, hi } => write!(f, "banded({lo}..{hi})"),
        }
    }
}

impl StructureTag {
    /// Diagonal offsets that may hold nonzero blocks at truncation size `n`.
    pub fn band(&self, n: usize) -> (i64, i64) {
        let full = n as i64 - 1;
        match *self {
            StructureTag::Dense | StructureTag::Toeplitz => (-full, full),
            StructureTag::UpperTriangular => (0, full),
            StructureTag::Banded { lo, hi } => (lo.max(-full), hi.min(full)),
        }
    }

    /// Tag describing the Schur product of matrices tagged `self` and `other`.
    pub(crate) fn meet(&self, other: &StructureTag, n: usize) -> StructureTag {
        if *self == StructureTag::Toeplitz && *other == StructureTag::Toeplitz {
            return StructureTag::Toeplitz;
        }
        let (a, b) = (self.band(n), other.band(n));
        Self::from_band(a.0.max(b.0), a.1.min(b.1), n)
    }

    pub(crate) fn from_band(lo: i64, hi: i64, n: usize) -> StructureTag {
        let full = n as i64 - 1;
        if lo <= -full && hi >= full {
            StructureTag::Dense
        } else if lo == 0 && hi >= full {
            StructureTag::UpperTriangular
        } else {
            StructureTag::Banded { lo, hi }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    dim: usize,
    size: usize,
    data: Vec<Complex64>,
    structure: StructureTag,
}

impl BlockMatrix {
    pub fn zeros(dim: usize, size: usize) -> Self {
        assert!(dim > 0 && size > 0, "BlockMatrix needs positive dimension and size");
        Self {
            dim,
            size,
            data: vec![ZERO; dim * dim * size * size],
            structure: StructureTag::Dense,
        }
    }

    /// Id on the main diagonal.
    pub fn identity(dim: usize, size: usize) -> Self {
        let id = OperatorBlock::identity(dim);
        let mut m = Self::zeros(dim, size);
        for k in 1..=size {
            m.put(k, k, id.entries());
        }
        m.structure = StructureTag::Banded { lo: 0, hi: 0 };
        m
    }

    /// The unit of the Schur product: every block equal to Id.
    pub fn ones(dim: usize, size: usize) -> Self {
        let id = OperatorBlock::identity(dim);
        let mut m = Self::from_fn(dim, size, |_, _| id.clone());
        m.structure = StructureTag::Toeplitz;
        m
    }

    /// Dense-tagged matrix with `block(k, j) = f(k, j)` (1-based).
    pub fn from_fn(dim: usize, size: usize, mut f: impl FnMut(usize, usize) -> OperatorBlock) -> Self {
        let mut m = Self::zeros(dim, size);
        for k in 1..=size {
            for j in 1..=size {
                let b = f(k, j);
                assert_eq!(b.dim(), dim, "block ({k},{j}) has the wrong dimension");
                m.put(k, j, b.entries());
            }
        }
        m
    }

    /// Builds a matrix from `((k, j), block)` pairs; unlisted blocks are zero. Later pairs
    /// overwrite earlier ones.
    pub fn from_blocks<I>(dim: usize, size: usize, blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), OperatorBlock)>,
    {
        if dim == 0 || size == 0 {
            return Err(Error::Precondition(
                "BlockMatrix needs positive dimension and size".into(),
            ));
        }
        let mut m = Self::zeros(dim, size);
        for ((k, j), b) in blocks {
            for idx in [k, j] {
                if idx == 0 || idx > size {
                    return Err(Error::IndexOutOfRange { index: idx, len: size });
                }
            }
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: b.dim(),
                });
            }
            m.put(k, j, b.entries());
        }
        Ok(m)
    }

    /// Re-tags the matrix after verifying the claim exactly.
    pub fn with_structure(mut self, tag: StructureTag) -> Result<Self> {
        self.verify_structure(tag)?;
        self.structure = tag;
        Ok(self)
    }

    pub(crate) fn with_structure_unchecked(mut self, tag: StructureTag) -> Self {
        debug_assert!(self.verify_structure(tag).is_ok(), "bad structure tag {tag}");
        self.structure = tag;
        self
    }

    pub fn verify_structure(&self, tag: StructureTag) -> Result<()> {
        let n = self.size;
        let violation = |k: usize, j: usize| Error::StructureViolation {
            tag: tag.to_string(),
            k,
            j,
        };
        if tag == StructureTag::Toeplitz {
            for k in 2..=n {
                for j in 2..=n {
                    if self.block_entries(k, j) != self.block_entries(k - 1, j - 1) {
                        return Err(violation(k, j));
                    }
                }
            }
            return Ok(());
        }
        let (lo, hi) = tag.band(n);
        for k in 1..=n {
            for j in 1..=n {
                let l = j as i64 - k as i64;
                if (l < lo || l > hi) && !self.block_is_zero(k, j) {
                    return Err(violation(k, j));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn structure(&self) -> StructureTag {
        self.structure
    }

    #[inline]
    fn offset(&self, k: usize, j: usize) -> usize {
        ((k - 1) * self.size + (j - 1)) * self.dim * self.dim
    }

    /// Row-major entries of block `(k, j)`, 1-based.
    pub fn block_entries(&self, k: usize, j: usize) -> &[Complex64] {
        assert!(
            k >= 1 && k <= self.size && j >= 1 && j <= self.size,
            "block ({k},{j}) out of range for size {}",
            self.size
        );
        let o = self.offset(k, j);
        &self.data[o..o + self.dim * self.dim]
    }

    /// Block `(k, j)`, 1-based. Panics when out of range; see [`BlockMatrix::get_block`].
    pub fn block(&self, k: usize, j: usize) -> OperatorBlock {
        OperatorBlock::from_slice(self.dim, self.block_entries(k, j))
    }

    pub fn get_block(&self, k: usize, j: usize) -> Option<OperatorBlock> {
        (k >= 1 && k <= self.size && j >= 1 && j <= self.size).then(|| self.block(k, j))
    }

    pub(crate) fn put(&mut self, k: usize, j: usize, entries: &[Complex64]) {
        let o = self.offset(k, j);
        let dd = self.dim * self.dim;
        self.data[o..o + dd].copy_from_slice(entries);
    }

    pub(crate) fn block_mut(&mut self, k: usize, j: usize) -> &mut [Complex64] {
        let o = self.offset(k, j);
        let dd = self.dim * self.dim;
        &mut self.data[o..o + dd]
    }

    pub fn block_is_zero(&self, k: usize, j: usize) -> bool {
        self.block_entries(k, j).iter().all(|z| *z == ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| *z == ZERO)
    }

    /// `sup_{k,j} ||T_kj||`.
    pub fn sup_entry_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for k in 1..=self.size {
            for j in 1..=self.size {
                best = best.max(block_op_norm(self.dim, self.block_entries(k, j)));
            }
        }
        best
    }

    /// `sup_k ||T_{k,k+l}||`, which is the operator norm of the diagonal `D_l`.
    pub fn diagonal_sup_norm(&self, l: i64) -> f64 {
        diagonal_positions(self.size, l)
            .map(|(k, j)| block_op_norm(self.dim, self.block_entries(k, j)))
            .fold(0.0, f64::max)
    }

    /// `D_l`: the blocks `(k, k+l)` kept, everything else zeroed.
    pub fn extract_diagonal(&self, l: i64) -> Result<BlockMatrix> {
        if l.unsigned_abs() as usize >= self.size {
            return Err(Error::EmptyDiagonal {
                offset: l,
                size: self.size,
            });
        }
        let mut out = Self::zeros(self.dim, self.size);
        for (k, j) in diagonal_positions(self.size, l) {
            out.put(k, j, self.block_entries(k, j));
        }
        Ok(out.with_structure_unchecked(StructureTag::Banded { lo: l, hi: l }))
    }

    /// `R_k`.
    pub fn extract_row(&self, k: usize) -> Result<BlockMatrix> {
        self.check_index(k)?;
        let mut out = Self::zeros(self.dim, self.size);
        for j in 1..=self.size {
            out.put(k, j, self.block_entries(k, j));
        }
        Ok(out)
    }

    /// `C_j`.
    pub fn extract_column(&self, j: usize) -> Result<BlockMatrix> {
        self.check_index(j)?;
        let mut out = Self::zeros(self.dim, self.size);
        for k in 1..=self.size {
            out.put(k, j, self.block_entries(k, j));
        }
        Ok(out)
    }

    /// `A^*` with blocks `S_kj = T_jk^*`.
    pub fn adjoint(&self) -> BlockMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d, self.size);
        for k in 1..=self.size {
            for j in 1..=self.size {
                let src = self.block_entries(j, k);
                let dst = out.block_mut(k, j);
                for r in 0..d {
                    for c in 0..d {
                        dst[r * d + c] = src[c * d + r].conj();
                    }
                }
            }
        }
        let tag = match self.structure {
            StructureTag::Dense => StructureTag::Dense,
            StructureTag::Toeplitz => StructureTag::Toeplitz,
            other => {
                let (lo, hi) = other.band(self.size);
                StructureTag::from_band(-hi, -lo, self.size)
            }
        };
        out.with_structure_unchecked(tag)
    }

    /// `(A x)_k = sum_j T_kj(x_j)`.
    pub fn apply(&self, x: &HVector) -> Result<HVector> {
        x.check_shape(self.dim, self.size)?;
        let d = self.dim;
        let (lo, hi) = self.structure.band(self.size);
        let mut y = HVector::zeros(d, self.size);
        for k in 1..=self.size {
            let cols = band_columns(k, lo, hi, self.size);
            let yk = y.coord_mut(k);
            for j in cols.clone() {
                let b = self.block_entries(k, j);
                let xj = x.coord(j);
                for r in 0..d {
                    let mut acc = ZERO;
                    for c in 0..d {
                        acc += b[r * d + c] * xj[c];
                    }
                    yk[r] += acc;
                }
            }
        }
        Ok(y)
    }

    /// `A^* x` without forming the adjoint.
    pub fn apply_adjoint(&self, x: &HVector) -> Result<HVector> {
        x.check_shape(self.dim, self.size)?;
        let d = self.dim;
        let (lo, hi) = self.structure.band(self.size);
        let mut y = HVector::zeros(d, self.size);
        for k in 1..=self.size {
            let cols = band_columns(k, lo, hi, self.size);
            let xk = x.coord(k).to_vec();
            for j in cols.clone() {
                let b = self.block_entries(k, j);
                let yj = y.coord_mut(j);
                for c in 0..d {
                    let mut acc = ZERO;
                    for r in 0..d {
                        acc += b[r * d + c].conj() * xk[r];
                    }
                    yj[c] += acc;
                }
            }
        }
        Ok(y)
    }

    /// The `(N d) x (N d)` scalar matrix this block matrix acts as.
    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let (n, d) = (self.size, self.dim);
        DMatrix::from_fn(n * d, n * d, |row, col| {
            let (k, r) = (row / d, row % d);
            let (j, c) = (col / d, col % d);
            self.data[((k * n + j) * d + r) * d + c]
        })
    }

    pub fn try_add(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &BlockMatrix, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<BlockMatrix> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect();
        let structure = if self.structure == other.structure {
            self.structure
        } else {
            let (a, b) = (self.structure.band(self.size), other.structure.band(self.size));
            StructureTag::from_band(a.0.min(b.0), a.1.max(b.1), self.size)
        };
        Ok(BlockMatrix {
            dim: self.dim,
            size: self.size,
            data,
            structure,
        })
    }

    pub fn scale(&self, c: Complex64) -> BlockMatrix {
        BlockMatrix {
            dim: self.dim,
            size: self.size,
            data: self.data.iter().map(|z| z * c).collect(),
            structure: self.structure,
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &BlockMatrix) -> f64 {
        assert_eq!(
            self.data.len(),
            other.data.len(),
            "comparing matrices of different shape"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Leading `m x m` corner.
    pub fn leading_corner(&self, m: usize) -> Result<BlockMatrix> {
        if m == 0 || m > self.size {
            return Err(Error::IndexOutOfRange {
                index: m,
                len: self.size,
            });
        }
        let mut out = Self::zeros(self.dim, m);
        for k in 1..=m {
            for j in 1..=m {
                out.put(k, j, self.block_entries(k, j));
            }
        }
        let tag = match self.structure {
            StructureTag::Banded { lo, hi } => StructureTag::from_band(lo, hi, m),
            other => other,
        };
        Ok(out.with_structure_unchecked(tag))
    }

    pub(crate) fn check_same_shape(&self, other: &BlockMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        if self.size != other.size {
            return Err(Error::SizeMismatch {
                expected: self.size,
                actual: other.size,
            });
        }
        Ok(())
    }

    fn check_index(&self, idx: usize) -> Result<()> {
        if idx == 0 || idx > self.size {
            return Err(Error::IndexOutOfRange {
                index: idx,
                len: self.size,
            });
        }
        Ok(())
    }

    /// Applies `f(l)` as a scalar weight to every block on diagonal `l`.
    pub(crate) fn weight_diagonals(&self, f: impl Fn(i64) -> Complex64, structure: StructureTag) -> BlockMatrix {
        let n = self.size;
        let weights: Vec<Complex64> = (-(n as i64 - 1)..=(n as i64 - 1)).map(&f).collect();
        let mut out = self.clone();
        for k in 1..=n {
            for j in 1..=n {
                let w = weights[(j as i64 - k as i64 + n as i64 - 1) as usize];
                for z in out.block_mut(k, j) {
                    *z *= w;
                }
            }
        }
        out.structure = structure;
        out
    }
}

/// Columns `j` of row `k` with `lo <= j - k <= hi`, clipped to `1..=n` (possibly empty).
pub(crate) fn band_columns(k: usize, lo: i64, hi: i64, n: usize) -> std::ops::RangeInclusive<usize> {
    let j_lo = (k as i64 + lo).max(1);
    let j_hi = (k as i64 + hi).min(n as i64);
    if j_lo > j_hi {
        #[allow(clippy::reversed_empty_ranges)]
        return 1..=0;
    }
    j_lo as usize..=j_hi as usize
}

/// 1-based positions `(k, k+l)` inside an `n x n` grid.
pub(crate) fn diagonal_positions(n: usize, l: i64) -> impl Iterator<Item = (usize, usize)> {
    let k_start = if l < 0 { (1 - l) as usize } else { 1 };
    let k_end = if l > 0 { n as i64 - l } else { n as i64 };
    (k_start as i64..=k_end).map(move |k| (k as usize, (k + l) as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hvector, random_matrix, seeded_rng};

    fn single_block(d: usize, n: usize, k: usize, j: usize, b: OperatorBlock) -> BlockMatrix {
        BlockMatrix::from_blocks(d, n, [((k, j), b)]).unwrap()
    }

    #[test]
    fn diagonal_of_identity_is_itself() {
        let a = BlockMatrix::identity(2, 4);
        let d0 = a.extract_diagonal(0).unwrap();
        assert_eq!(d0.max_abs_diff(&a), 0.0);
    }

    #[test]
    fn diagonal_extraction_keeps_only_that_diagonal() {
        let mut rng = seeded_rng(3);
        let a = random_matrix(&mut rng, 2, 5);
        let d1 = a.extract_diagonal(1).unwrap();
        for k in 1..=5 {
            for j in 1..=5 {
                if j == k + 1 {
                    assert_eq!(d1.block(k, j), a.block(k, j));
                } else {
                    assert!(d1.block_is_zero(k, j));
                }
            }
        }
        assert_eq!(d1.structure(), StructureTag::Banded { lo: 1, hi: 1 });
    }

    #[test]
    fn empty_diagonal_is_an_error() {
        let a = BlockMatrix::identity(1, 3);
        assert_eq!(a.extract_diagonal(3), Err(Error::EmptyDiagonal { offset: 3, size: 3 }));
        assert!(a.extract_diagonal(-3).is_err());
        assert!(a.extract_diagonal(-2).is_ok());
    }

    #[test]
    fn diagonals_rows_and_columns_partition_the_matrix() {
        let mut rng = seeded_rng(11);
        let a = random_matrix(&mut rng, 3, 4);
        let mut by_diag = BlockMatrix::zeros(3, 4);
        for l in -3..=3 {
            by_diag = by_diag.try_add(&a.extract_diagonal(l).unwrap()).unwrap();
        }
        assert_eq!(by_diag.max_abs_diff(&a), 0.0);
        let mut by_row = BlockMatrix::zeros(3, 4);
        let mut by_col = BlockMatrix::zeros(3, 4);
        for i in 1..=4 {
            by_row = by_row.try_add(&a.extract_row(i).unwrap()).unwrap();
            by_col = by_col.try_add(&a.extract_column(i).unwrap()).unwrap();
        }
        assert_eq!(by_row.max_abs_diff(&a), 0.0);
        assert_eq!(by_col.max_abs_diff(&a), 0.0);
    }

    #[test]
    fn row_then_column_isolates_one_block() {
        let mut rng = seeded_rng(5);
        let a = random_matrix(&mut rng, 2, 4);
        let one = a.extract_row(3).unwrap().extract_column(2).unwrap();
        for k in 1..=4 {
            for j in 1..=4 {
                if (k, j) == (3, 2) {
                    assert_eq!(one.block(k, j), a.block(3, 2));
                } else {
                    assert!(one.block_is_zero(k, j));
                }
            }
        }
        assert!(a.extract_row(5).is_err());
        assert!(a.extract_column(0).is_err());
    }

    #[test]
    fn adjoint_moves_and_conjugates_blocks() {
        let t = OperatorBlock::from_row_major(
            2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(3.0, 0.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(4.0, 4.0),
            ],
        )
        .unwrap();
        let a = single_block(2, 3, 1, 2, t.clone());
        let adj = a.adjoint();
        assert_eq!(adj.block(2, 1), t.adjoint());
        assert!(adj.block_is_zero(1, 2));
        assert_eq!(adj.adjoint(), a);
    }

    #[test]
    fn adjoint_of_upper_triangular_is_lower() {
        let mut rng = seeded_rng(9);
        let a = random_matrix(&mut rng, 2, 4);
        let mut upper = BlockMatrix::zeros(2, 4);
        for l in 0..4 {
            upper = upper.try_add(&a.extract_diagonal(l).unwrap()).unwrap();
        }
        let upper = upper.with_structure(StructureTag::UpperTriangular).unwrap();
        let lower = upper.adjoint();
        assert_eq!(lower.structure(), StructureTag::Banded { lo: -3, hi: 0 });
        lower.verify_structure(StructureTag::Banded { lo: -3, hi: 0 }).unwrap();
        assert!(lower.verify_structure(StructureTag::UpperTriangular).is_err());
    }

    #[test]
    fn structure_tags_are_verified() {
        let mut rng = seeded_rng(1);
        let a = random_matrix(&mut rng, 1, 3);
        assert!(matches!(
            a.clone().with_structure(StructureTag::Toeplitz),
            Err(Error::StructureViolation { .. })
        ));
        assert!(a.with_structure(StructureTag::UpperTriangular).is_err());
        assert!(BlockMatrix::ones(2, 3).with_structure(StructureTag::Toeplitz).is_ok());
    }

    #[test]
    fn apply_single_block() {
        let t = OperatorBlock::from_row_major(
            2,
            vec![
                Complex64::new(0.0, 1.0),
                ZERO,
                Complex64::new(2.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        let a = single_block(2, 3, 2, 3, t.clone());
        let mut rng = seeded_rng(2);
        let x = random_hvector(&mut rng, 2, 3);
        let y = a.apply(&x).unwrap();
        assert_eq!(y.coord(1), &[ZERO, ZERO]);
        assert_eq!(y.coord(2), t.apply(x.coord(3)).as_slice());
        assert_eq!(y.coord(3), &[ZERO, ZERO]);
        let ident = BlockMatrix::identity(2, 3).apply(&x).unwrap();
        assert_eq!(ident, x);
    }

    #[test]
    fn apply_adjoint_matches_adjoint_apply() {
        let mut rng = seeded_rng(4);
        let a = random_matrix(&mut rng, 3, 5);
        let x = random_hvector(&mut rng, 3, 5);
        let lhs = a.apply_adjoint(&x).unwrap();
        let rhs = a.adjoint().apply(&x).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn apply_on_strictly_lower_bands() {
        let mut rng = seeded_rng(9);
        let a = random_matrix(&mut rng, 2, 5);
        let d = a.extract_diagonal(-3).unwrap();
        let x = random_hvector(&mut rng, 2, 5);
        let dense = d.clone().with_structure(StructureTag::Dense).unwrap();
        assert!(d.apply(&x).unwrap().max_abs_diff(&dense.apply(&x).unwrap()) < 1e-14);
        assert!(
            d.apply_adjoint(&x)
                .unwrap()
                .max_abs_diff(&dense.apply_adjoint(&x).unwrap())
                < 1e-14
        );
    }

    #[test]
    fn apply_rejects_wrong_shapes() {
        let a = BlockMatrix::identity(2, 3);
        assert!(a.apply(&HVector::zeros(2, 4)).is_err());
        assert!(a.apply(&HVector::zeros(3, 3)).is_err());
    }

    #[test]
    fn sup_entry_norm_is_largest_block_norm() {
        let b = OperatorBlock::scalar(2, Complex64::new(0.0, 3.0));
        let a = BlockMatrix::from_blocks(2, 3, [((1, 1), OperatorBlock::identity(2)), ((3, 2), b)]).unwrap();
        assert!((a.sup_entry_norm() - 3.0).abs() < 1e-12);
    }
}
