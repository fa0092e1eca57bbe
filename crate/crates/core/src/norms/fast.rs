//! Block Toeplitz matrix-vector products through a circulant embedding.
//!
//! With `h[s] = T_{-s}`, the product `y_k = sum_j T_{j-k} x_j` is the linear convolution
//! `(h * x)_k`. Padding both sequences to a power of two `P >= 2N - 1` turns it into a
//! circular convolution, diagonalized by the DFT: `Y(w) = H(w) X(w)` with
//! `H(w) = sum_m T_m e^{+2 pi i w m / P}`, a `d x d` block per frequency. The adjoint uses
//! `H(w)^*` at the same frequencies.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::block::{OperatorBlock, ZERO};
use crate::error::{Error, Result};
use crate::toeplitz::ToeplitzSpec;
use crate::vector::HVector;

pub struct FastToeplitz {
    dim: usize,
    size: usize,
    period: usize,
    /// `H(w)` for every frequency, row-major blocks laid end to end.
    symbol: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl FastToeplitz {
    pub fn new(spec: &ToeplitzSpec, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Precondition("truncation size must be positive".into()));
        }
        let d = spec.dim();
        let dd = d * d;
        let period = (2 * size - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(period);
        let inverse = planner.plan_fft_inverse(period);

        // H(w) = sum_m T_m e^{+i w m}: an inverse DFT of the coefficients placed at m mod P.
        let mut symbol = vec![ZERO; period * dd];
        let mut buf = vec![ZERO; period];
        for e in 0..dd {
            buf.fill(ZERO);
            for (&m, b) in spec.coefficients() {
                if m.unsigned_abs() as usize >= size {
                    continue;
                }
                buf[m.rem_euclid(period as i64) as usize] = b.entries()[e];
            }
            inverse.process(&mut buf);
            for (w, v) in buf.iter().enumerate() {
                symbol[w * dd + e] = *v;
            }
        }
        Ok(Self {
            dim: d,
            size,
            period,
            symbol,
            forward,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn apply(&self, x: &HVector) -> Result<HVector> {
        self.run(x, false)
    }

    pub fn apply_adjoint(&self, x: &HVector) -> Result<HVector> {
        self.run(x, true)
    }

    fn run(&self, x: &HVector, adjoint: bool) -> Result<HVector> {
        x.check_shape(self.dim, self.size)?;
        let (d, n, p) = (self.dim, self.size, self.period);
        let dd = d * d;

        // Component c of every coordinate, zero padded to P, transformed.
        let mut spectra = vec![ZERO; d * p];
        for c in 0..d {
            let lane = &mut spectra[c * p..(c + 1) * p];
            for k in 0..n {
                lane[k] = x.coord(k + 1)[c];
            }
            self.forward.process(lane);
        }

        let mut out = vec![ZERO; d * p];
        for w in 0..p {
            let h = &self.symbol[w * dd..(w + 1) * dd];
            for r in 0..d {
                let mut acc = ZERO;
                for c in 0..d {
                    let hv = if adjoint { h[c * d + r].conj() } else { h[r * d + c] };
                    acc += hv * spectra[c * p + w];
                }
                out[r * p + w] = acc;
            }
        }

        let scale = 1.0 / p as f64;
        let mut y = HVector::zeros(d, n);
        for r in 0..d {
            let lane = &mut out[r * p..(r + 1) * p];
            self.inverse.process(lane);
            for k in 0..n {
                y.coord_mut(k + 1)[r] = lane[k] * scale;
            }
        }
        Ok(y)
    }

    /// `H(w)` at `w = 2 pi m / P`, mostly for inspection.
    pub fn frequency_block(&self, m: usize) -> OperatorBlock {
        let dd = self.dim * self.dim;
        OperatorBlock::from_slice(self.dim, &self.symbol[m * dd..(m + 1) * dd])
    }

    pub fn period(&self) -> usize {
        self.period
    }
}

/// `realize_toeplitz(spec, N) x` without forming the matrix; `N` is taken from `x`.
pub fn toeplitz_apply_fast(spec: &ToeplitzSpec, x: &HVector) -> Result<HVector> {
    if x.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: x.dim(),
        });
    }
    FastToeplitz::new(spec, x.len())?.apply(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hvector, random_toeplitz_spec, seeded_rng};
    use std::collections::BTreeMap;

    #[test]
    fn identity_spec_leaves_vector_unchanged() {
        let mut rng = seeded_rng(61);
        let spec = ToeplitzSpec::from_coefficients(2, BTreeMap::from([(0, OperatorBlock::identity(2))])).unwrap();
        let x = random_hvector(&mut rng, 2, 9);
        assert!(toeplitz_apply_fast(&spec, &x).unwrap().max_abs_diff(&x) < 1e-14);
    }

    #[test]
    fn superdiagonal_shifts_left() {
        let mut rng = seeded_rng(62);
        let spec = ToeplitzSpec::from_coefficients(1, BTreeMap::from([(1, OperatorBlock::identity(1))])).unwrap();
        let x = random_hvector(&mut rng, 1, 6);
        let y = toeplitz_apply_fast(&spec, &x).unwrap();
        for k in 1..6 {
            assert!((y.coord(k)[0] - x.coord(k + 1)[0]).norm() < 1e-14);
        }
        assert!(y.coord(6)[0].norm() < 1e-14);
    }

    #[test]
    fn matches_dense_apply_and_adjoint() {
        let mut rng = seeded_rng(63);
        for (d, n, lo, hi) in [(1, 1, 0, 0), (2, 7, -2, 3), (3, 16, -20, 4), (1, 33, -5, 5)] {
            let spec = random_toeplitz_spec(&mut rng, d, lo, hi);
            let a = spec.realize(n);
            let fast = FastToeplitz::new(&spec, n).unwrap();
            let x = random_hvector(&mut rng, d, n);
            assert!(fast.apply(&x).unwrap().max_abs_diff(&a.apply(&x).unwrap()) < 1e-10);
            assert!(
                fast.apply_adjoint(&x)
                    .unwrap()
                    .max_abs_diff(&a.apply_adjoint(&x).unwrap())
                    < 1e-10
            );
        }
    }

    #[test]
    fn rejects_wrong_dimension() {
        let mut rng = seeded_rng(64);
        let spec = random_toeplitz_spec(&mut rng, 2, -1, 1);
        let x = random_hvector(&mut rng, 3, 4);
        assert!(toeplitz_apply_fast(&spec, &x).is_err());
    }
}
