//! Matrices whose entries are operators on `C^d`, their Schur (blockwise composition)
//! products, summability-kernel smoothing, and norm estimators for the resulting
//! operator and multiplier norms.
//!
//! Block positions are 1-based throughout the public API.

pub mod block;
pub mod corpus;
pub mod error;
pub mod format;
pub mod kernel;
pub mod lab;
pub mod matrix;
pub mod norms;
pub mod random;
pub mod schur;
pub mod symbol;
pub mod toeplitz;
pub mod vector;

pub use block::OperatorBlock;
pub use error::{Error, Result};
pub use kernel::KernelSpec;
pub use matrix::{BlockMatrix, StructureTag};
pub use schur::{
    kernel_matrix, modulate, rank_one_matrix, schur_product, smooth_fejer, smooth_poisson, toeplitz_from_symbol,
};
pub use symbol::SymbolPolynomial;
pub use toeplitz::{realize_toeplitz, ToeplitzSpec};
pub use vector::HVector;

pub use norms::{EstimateKind, NormEstimate, Side};
pub use num_complex::Complex64;
