//! Matrix-free largest singular value by power iteration on `A^* A`.

use crate::error::{Error, Result};
use crate::matrix::{BlockMatrix, StructureTag};
use crate::random::{random_hvector, seeded_rng};
use crate::toeplitz::ToeplitzSpec;
use crate::vector::HVector;

use super::estimate::{EstimateKind, NormEstimate};
use super::fast::FastToeplitz;

/// Anything that can apply itself and its adjoint to an `HVector` of fixed shape.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn len(&self) -> usize;
    fn apply(&self, x: &HVector) -> HVector;
    fn apply_adjoint(&self, x: &HVector) -> HVector;
}

impl LinearOperator for BlockMatrix {
    fn dim(&self) -> usize {
        BlockMatrix::dim(self)
    }
    fn len(&self) -> usize {
        self.size()
    }
    fn apply(&self, x: &HVector) -> HVector {
        BlockMatrix::apply(self, x).expect("shape checked by the caller")
    }
    fn apply_adjoint(&self, x: &HVector) -> HVector {
        BlockMatrix::apply_adjoint(self, x).expect("shape checked by the caller")
    }
}

impl LinearOperator for FastToeplitz {
    fn dim(&self) -> usize {
        FastToeplitz::dim(self)
    }
    fn len(&self) -> usize {
        self.size()
    }
    fn apply(&self, x: &HVector) -> HVector {
        FastToeplitz::apply(self, x).expect("shape checked by the caller")
    }
    fn apply_adjoint(&self, x: &HVector) -> HVector {
        FastToeplitz::apply_adjoint(self, x).expect("shape checked by the caller")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations without a new best residual before restarting from a fresh vector.
    pub plateau: usize,
}

impl Default for PowerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 5000,
            plateau: 50,
        }
    }
}

/// Toeplitz-tagged inputs at least this large go through the FFT path.
const FFT_THRESHOLD: usize = 64;

pub fn operator_norm_iterative(a: &BlockMatrix, tol: f64, max_iter: usize, seed: u64) -> Result<NormEstimate> {
    if !(tol > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "tol",
            value: tol,
            range: "(0, inf)",
        });
    }
    if a.is_zero() {
        return Ok(NormEstimate::zero("power_iteration"));
    }
    let cfg = PowerConfig {
        tol,
        max_iter,
        ..PowerConfig::default()
    };
    if a.structure() == StructureTag::Toeplitz && a.size() >= FFT_THRESHOLD {
        let fast = FastToeplitz::new(&ToeplitzSpec::from_matrix(a)?, a.size())?;
        let mut e = power_iteration(&fast, &cfg, seed);
        e.method = "power_iteration_fft".into();
        return Ok(e);
    }
    Ok(power_iteration(a, &cfg, seed))
}

/// Power iteration with Rayleigh quotient `lambda = ||A v||^2` and residual
/// `||A^*A v - lambda v|| / lambda`. Converged runs are reported as exact at truncation;
/// otherwise the best Rayleigh value is a lower bound (`sqrt(lambda) <= ||A||` always).
pub fn power_iteration<L: LinearOperator + ?Sized>(op: &L, cfg: &PowerConfig, seed: u64) -> NormEstimate {
    let (d, n) = (op.dim(), op.len());
    let mut best = (0.0f64, f64::INFINITY);
    let mut iterations = 0;
    let mut restart = 0u64;

    'outer: while iterations < cfg.max_iter {
        let mut rng = seeded_rng(seed.wrapping_add(restart.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let mut v = random_hvector(&mut rng, d, n);
        let nv = v.norm();
        if nv == 0.0 {
            break;
        }
        v.scale_in_place(1.0 / nv);
        let mut last_improvement = iterations;
        let mut run_best = f64::INFINITY;

        while iterations < cfg.max_iter {
            iterations += 1;
            let av = op.apply(&v);
            let lambda = av.norm_sqr();
            if lambda == 0.0 {
                // v is in the kernel; only a fresh start can help.
                restart += 1;
                continue 'outer;
            }
            let mut w = op.apply_adjoint(&av);
            let residual = w
                .as_flat()
                .iter()
                .zip(v.as_flat())
                .map(|(a, b)| (a - b * lambda).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / lambda;
            if lambda > best.0 || (lambda == best.0 && residual < best.1) {
                best = (lambda, residual);
            }
            if residual < cfg.tol {
                return NormEstimate::new(lambda.sqrt(), EstimateKind::ExactTruncation, "power_iteration")
                    .with_iterations(iterations)
                    .with_residual(residual);
            }
            if residual < run_best {
                run_best = residual;
                last_improvement = iterations;
            } else if iterations - last_improvement >= cfg.plateau {
                restart += 1;
                continue 'outer;
            }
            let nw = w.norm();
            w.scale_in_place(1.0 / nw);
            v = w;
        }
    }
    NormEstimate::new(best.0.sqrt(), EstimateKind::LowerBound, "power_iteration")
        .with_iterations(iterations)
        .with_residual(best.1)
}
