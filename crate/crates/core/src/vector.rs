//! Truncations of `l^2(H)`: length-`N` sequences of vectors in `C^d`.

use num_complex::Complex64;

use crate::block::ZERO;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct HVector {
    dim: usize,
    len: usize,
    data: Vec<Complex64>,
}

impl HVector {
    pub fn zeros(dim: usize, len: usize) -> Self {
        assert!(dim > 0 && len > 0, "HVector needs positive dimension and length");
        Self {
            dim,
            len,
            data: vec![ZERO; dim * len],
        }
    }

    /// Coordinates laid out one after another: `data[(n-1)*d .. n*d]` is `x_n`.
    pub fn from_flat(dim: usize, len: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || len == 0 {
            return Err(Error::Precondition(
                "HVector needs positive dimension and length".into(),
            ));
        }
        if data.len() != dim * len {
            return Err(Error::SizeMismatch {
                expected: dim * len,
                actual: data.len(),
            });
        }
        Ok(Self { dim, len, data })
    }

    pub fn from_coords(dim: usize, coords: &[Vec<Complex64>]) -> Result<Self> {
        let mut data = Vec::with_capacity(dim * coords.len());
        for c in coords {
            if c.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: c.len(),
                });
            }
            data.extend_from_slice(c);
        }
        Self::from_flat(dim, coords.len(), data)
    }

    /// `x e_j`: `x` placed at the 1-based coordinate `j`, zeros elsewhere.
    pub fn basis(x: &[Complex64], j: usize, len: usize) -> Result<Self> {
        if j == 0 || j > len {
            return Err(Error::IndexOutOfRange { index: j, len });
        }
        if x.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        let mut v = Self::zeros(x.len(), len);
        v.coord_mut(j).copy_from_slice(x);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_flat(&self) -> &[Complex64] {
        &self.data
    }

    /// Coordinate `x_n` for 1-based `n`.
    pub fn coord(&self, n: usize) -> &[Complex64] {
        assert!(n >= 1 && n <= self.len, "coordinate {n} out of range 1..={}", self.len);
        &self.data[(n - 1) * self.dim..n * self.dim]
    }

    pub(crate) fn coord_mut(&mut self, n: usize) -> &mut [Complex64] {
        let d = self.dim;
        &mut self.data[(n - 1) * d..n * d]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<<self, other>> = sum_n <x_n, y_n>`, linear in `self`.
    pub fn inner(&self, other: &HVector) -> Complex64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data.iter().zip(&other.data).map(|(a, b)| a * b.conj()).sum()
    }

    pub fn scale(&self, c: Complex64) -> HVector {
        HVector {
            dim: self.dim,
            len: self.len,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub(crate) fn scale_in_place(&mut self, c: f64) {
        for z in &mut self.data {
            *z *= c;
        }
    }

    pub fn max_abs_diff(&self, other: &HVector) -> f64 {
        assert_eq!(self.data.len(), other.data.len());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_shape(&self, dim: usize, len: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: self.dim,
            });
        }
        if self.len != len {
            return Err(Error::SizeMismatch {
                expected: len,
                actual: self.len,
            });
        }
        Ok(())
    }
}
