//! Operator-valued trigonometric polynomials `P(t) = sum_l T_l e^{ilt}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::block::{OperatorBlock, ZERO};
use crate::error::{Error, Result};
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPolynomial {
    dim: usize,
    terms: BTreeMap<i64, OperatorBlock>,
}

impl SymbolPolynomial {
    pub fn new(dim: usize, terms: BTreeMap<i64, OperatorBlock>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("block dimension must be positive".into()));
        }
        for b in terms.values() {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: b.dim(),
                });
            }
        }
        Ok(Self { dim, terms })
    }

    /// `e^{ilt} T`.
    pub fn monomial(l: i64, t: OperatorBlock) -> Self {
        let dim = t.dim();
        Self {
            dim,
            terms: BTreeMap::from([(l, t)]),
        }
    }

    /// `cos(t) Id`.
    pub fn cosine(dim: usize) -> Self {
        let half = OperatorBlock::scalar(dim, Complex64::new(0.5, 0.0));
        Self {
            dim,
            terms: BTreeMap::from([(-1, half.clone()), (1, half)]),
        }
    }

    /// Sawtooth coefficients `1/(il)` for `0 < |l| <= degree`, scalar (`d = 1`).
    pub fn sawtooth(degree: i64) -> Self {
        let terms = (-degree..=degree)
            .filter(|&l| l != 0)
            .map(|l| (l, OperatorBlock::scalar(1, Complex64::new(0.0, -1.0 / l as f64))))
            .collect();
        Self { dim: 1, terms }
    }

    /// Fourier coefficients `(1/M) sum_m f(t_m) e^{-il t_m}` for `|l| <= degree`, computed with
    /// an `M`-point trapezoid rule. Entry point for symbols that are not polynomials.
    pub fn from_samples(dim: usize, degree: i64, grid: usize, f: impl Fn(f64) -> OperatorBlock) -> Result<Self> {
        if grid < 2 * degree as usize + 1 {
            return Err(Error::Precondition(format!(
                "grid {grid} too coarse for degree {degree}"
            )));
        }
        let samples: Vec<OperatorBlock> = (0..grid).map(|m| f(2.0 * PI * m as f64 / grid as f64)).collect();
        let mut terms = BTreeMap::new();
        for l in -degree..=degree {
            let mut acc = OperatorBlock::zeros(dim);
            for (m, s) in samples.iter().enumerate() {
                let t = 2.0 * PI * m as f64 / grid as f64;
                acc = &acc + &s.scale(Complex64::from_polar(1.0, -(l as f64) * t));
            }
            terms.insert(l, acc.scale(Complex64::new(1.0 / grid as f64, 0.0)));
        }
        Self::new(dim, terms)
    }

    pub fn from_toeplitz(spec: &ToeplitzSpec) -> Self {
        Self {
            dim: spec.dim(),
            terms: spec.coefficients().clone(),
        }
    }

    pub fn to_toeplitz(&self) -> ToeplitzSpec {
        ToeplitzSpec::from_coefficients(self.dim, self.terms.clone()).expect("terms share the dimension")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<i64, OperatorBlock> {
        &self.terms
    }

    /// `max |l|` over the support (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    /// Smallest quadrature grid accepted by the symbol norms: `4 (degree + 1)`.
    pub fn min_grid(&self) -> usize {
        4 * (self.degree() + 1)
    }

    pub fn fourier_coefficient(&self, l: i64) -> OperatorBlock {
        self.terms
            .get(&l)
            .cloned()
            .unwrap_or_else(|| OperatorBlock::zeros(self.dim))
    }

    pub fn eval(&self, t: f64) -> OperatorBlock {
        let mut acc = OperatorBlock::zeros(self.dim);
        for (&l, b) in &self.terms {
            acc = &acc + &b.scale(Complex64::from_polar(1.0, l as f64 * t));
        }
        acc
    }

    /// `f^*(t) = f(t)^*`, with coefficients `(T_{-l})^*`.
    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(&l, b)| (-l, b.adjoint())).collect(),
        }
    }

    /// Values `P(2 pi m / M)` for `m = 0..M`, as row-major `d x d` blocks laid end to end.
    /// Exact on the grid for any `M` because `e^{ilt_m}` only depends on `l mod M`.
    pub fn sample_grid(&self, grid: usize) -> Vec<Complex64> {
        let d = self.dim;
        let dd = d * d;
        let mut out = vec![ZERO; grid * dd];
        if self.terms.is_empty() {
            return out;
        }
        let fft = FftPlanner::<f64>::new().plan_fft_inverse(grid);
        let mut buf = vec![ZERO; grid];
        for e in 0..dd {
            buf.fill(ZERO);
            for (&l, b) in &self.terms {
                buf[l.rem_euclid(grid as i64) as usize] += b.entries()[e];
            }
            fft.process(&mut buf);
            for (m, v) in buf.iter().enumerate() {
                out[m * dd + e] = *v;
            }
        }
        out
    }
}
