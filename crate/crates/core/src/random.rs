//! Seeded random instances. Everything here is deterministic for a fixed seed.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::block::OperatorBlock;
use crate::matrix::BlockMatrix;
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;
use crate::vector::HVector;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_block<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> OperatorBlock {
    OperatorBlock::from_fn(dim, |_, _| complex_gaussian(rng))
}

pub fn random_hvector<R: Rng + ?Sized>(rng: &mut R, dim: usize, len: usize) -> HVector {
    HVector::from_flat(dim, len, random_vector(rng, dim * len)).expect("shape is consistent")
}

/// Dense matrix with i.i.d. complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize) -> BlockMatrix {
    BlockMatrix::from_fn(dim, size, |_, _| random_block(rng, dim))
}

/// Dense matrix with real Gaussian entries; with `dim = 1` this is a scalar matrix.
pub fn random_real_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, size: usize) -> BlockMatrix {
    BlockMatrix::from_fn(dim, size, |_, _| {
        OperatorBlock::from_fn(dim, |_, _| Complex64::new(rng.sample(StandardNormal), 0.0))
    })
}

/// Toeplitz data with Gaussian coefficients on every diagonal in `lo..=hi`.
pub fn random_toeplitz_spec<R: Rng + ?Sized>(rng: &mut R, dim: usize, lo: i64, hi: i64) -> ToeplitzSpec {
    let coeffs: BTreeMap<i64, OperatorBlock> = (lo..=hi).map(|l| (l, random_block(rng, dim))).collect();
    ToeplitzSpec::new(dim, lo, hi, coeffs).expect("coefficients lie in the band")
}

/// Trigonometric polynomial with Gaussian coefficients for `|l| <= degree`.
pub fn random_symbol<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: i64) -> SymbolPolynomial {
    let terms: BTreeMap<i64, OperatorBlock> = (-degree..=degree).map(|l| (l, random_block(rng, dim))).collect();
    SymbolPolynomial::new(dim, terms).expect("terms share the dimension")
}
