use crate::error::{Error, Result};
use crate::matrix::BlockMatrix;

use super::estimate::{EstimateKind, NormEstimate};

/// Largest flattened size `N d` handled by a full SVD.
pub const DENSE_CAP: usize = 4096;

/// Largest singular value of the `(N d) x (N d)` flattening, by a full SVD.
pub fn operator_norm_dense(a: &BlockMatrix) -> Result<NormEstimate> {
    operator_norm_dense_capped(a, DENSE_CAP)
}

pub fn operator_norm_dense_capped(a: &BlockMatrix, cap: usize) -> Result<NormEstimate> {
    let rows = a.size() * a.dim();
    if rows > cap {
        return Err(Error::DenseCapExceeded { rows, cap });
    }
    if a.is_zero() {
        return Ok(NormEstimate::zero("dense_svd"));
    }
    let sigma = a.to_dense().singular_values().max();
    // The SVD is backward stable: the reported value is exact for a perturbation of
    // relative size about eps * (N d).
    let residual = f64::EPSILON * rows as f64;
    Ok(NormEstimate::new(sigma, EstimateKind::ExactTruncation, "dense_svd")
        .with_iterations(1)
        .with_residual(residual))
}
