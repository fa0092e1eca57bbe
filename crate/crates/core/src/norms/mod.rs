//! Operator norms at truncation, Schur multiplier bounds, and symbol norms.

pub mod dense;
pub mod estimate;
pub mod fast;
pub mod iterative;
pub mod multiplier;
pub mod symbol_norms;

pub use dense::{operator_norm_dense, DENSE_CAP};
pub use estimate::{format_real, EstimateKind, NormEstimate, CSV_HEADER};
pub use fast::{toeplitz_apply_fast, FastToeplitz};
pub use iterative::{operator_norm_iterative, power_iteration, LinearOperator, PowerConfig};
pub use multiplier::{
    multiplier_lower_bound, multiplier_lower_bound_seeded, multiplier_upper_bound, multiplier_upper_bound_with,
    BoundHint, MultiplierUpperBound, Probe, ProbeConfig, ProbeSet, Side,
};
pub use symbol_norms::{l1_sot_norm, periodic_mean, symbol_l1_norm, symbol_sup_norm, OptimizerConfig};

use crate::error::Result;
use crate::matrix::BlockMatrix;

/// Seed of the power iteration when the dense route is out of reach.
const ITERATIVE_SEED: u64 = 0;

/// `||A||` at truncation: dense SVD up to [`DENSE_CAP`], power iteration with `tol` beyond.
pub fn operator_norm(a: &BlockMatrix, tol: f64) -> Result<NormEstimate> {
    if a.size() * a.dim() <= DENSE_CAP {
        operator_norm_dense(a)
    } else {
        operator_norm_iterative(a, tol, PowerConfig::default().max_iter, ITERATIVE_SEED)
    }
}

/// A certified upper bound for `||A||`: the dense SVD value, or beyond the cap the Schur
/// test `sqrt(max row sum * max column sum)` of the block norms.
pub fn operator_norm_upper(a: &BlockMatrix) -> Result<NormEstimate> {
    if a.size() * a.dim() <= DENSE_CAP {
        let e = operator_norm_dense(a)?;
        return Ok(NormEstimate {
            kind: EstimateKind::UpperBound,
            ..e
        });
    }
    let n = a.size();
    let mut rows = vec![0.0f64; n];
    let mut cols = vec![0.0f64; n];
    for k in 1..=n {
        for j in 1..=n {
            if a.block_is_zero(k, j) {
                continue;
            }
            let v = crate::block::block_op_norm(a.dim(), a.block_entries(k, j));
            rows[k - 1] += v;
            cols[j - 1] += v;
        }
    }
    let r = rows.into_iter().fold(0.0, f64::max);
    let c = cols.into_iter().fold(0.0, f64::max);
    Ok(NormEstimate::new(
        (r * c).sqrt(),
        EstimateKind::UpperBound,
        "schur_test",
    ))
}
