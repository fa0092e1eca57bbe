//! Norms of operator-valued trigonometric polynomials on the circle.
//!
//! All integrals and suprema use a uniform grid of `M` points, doubled until successive
//! values differ by less than `REFINE_TOL` (relative above 1). The grid must have at
//! least `4 (degree + 1)` points so that Fourier coefficients are recovered exactly.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::block::{block_op_norm, ZERO};
use crate::error::{Error, Result};
use crate::random::{random_vector, seeded_rng};
use crate::symbol::SymbolPolynomial;

use super::estimate::{EstimateKind, NormEstimate};

pub const REFINE_TOL: f64 = 1e-8;

/// Upper limit on `M d^2` during refinement.
const MAX_SAMPLES: usize = 1 << 22;

/// A reasonable starting grid for `f`.
pub fn default_grid(f: &SymbolPolynomial) -> usize {
    f.min_grid().max(64)
}

fn check_grid(f: &SymbolPolynomial, grid: usize) -> Result<()> {
    if grid < f.min_grid() {
        return Err(Error::Precondition(format!(
            "grid of {grid} points is below the minimum {} for degree {}",
            f.min_grid(),
            f.degree()
        )));
    }
    Ok(())
}

fn pointwise_norms(f: &SymbolPolynomial, grid: usize) -> Vec<f64> {
    let d = f.dim();
    let dd = d * d;
    let samples = f.sample_grid(grid);
    samples.chunks_exact(dd).map(|b| block_op_norm(d, b)).collect()
}

fn converged(prev: f64, next: f64) -> bool {
    (next - prev).abs() < REFINE_TOL * next.abs().max(1.0)
}

/// Runs `eval` on `grid, 2 grid, 4 grid, ...` until it settles or the sample cap is hit.
/// Returns the last value and the last change.
fn refine(grid: usize, cost_per_point: usize, mut eval: impl FnMut(usize) -> f64) -> (f64, f64) {
    let mut m = grid;
    let mut value = eval(m);
    let mut change = f64::INFINITY;
    while (2 * m).saturating_mul(cost_per_point) <= MAX_SAMPLES {
        m *= 2;
        let next = eval(m);
        change = (next - value).abs();
        let done = converged(value, next);
        value = next;
        if done {
            break;
        }
    }
    (value, change)
}

/// `sup_t ||f(t)||`.
pub fn symbol_sup_norm(f: &SymbolPolynomial, grid: usize) -> Result<f64> {
    check_grid(f, grid)?;
    let dd = f.dim() * f.dim();
    Ok(refine(grid, dd, |m| pointwise_norms(f, m).into_iter().fold(0.0, f64::max)).0)
}

/// `(1/2pi) int ||f(t)|| dt`.
pub fn symbol_l1_norm(f: &SymbolPolynomial, grid: usize) -> Result<f64> {
    check_grid(f, grid)?;
    let dd = f.dim() * f.dim();
    Ok(refine(grid, dd, |m| mean(&pointwise_norms(f, m))).0)
}

/// `(1/2pi) int g(t) dt` for a continuous `2pi`-periodic `g`, by refined trapezoid sums.
pub fn periodic_mean(g: impl Fn(f64) -> f64, grid: usize) -> f64 {
    let grid = grid.max(1);
    refine(grid, 1, |m| {
        let s: f64 = (0..m).map(|i| g(2.0 * PI * i as f64 / m as f64)).sum();
        s / m as f64
    })
    .0
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub steps: usize,
    pub step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            steps: 200,
            step: 0.1,
        }
    }
}

/// Samples of the `C^d`-valued polynomial `t -> P(t) x` on `m` points, laid end to end.
fn vector_samples(p: &SymbolPolynomial, x: &[Complex64], m: usize) -> Vec<Complex64> {
    let d = p.dim();
    let mut out = vec![ZERO; m * d];
    if p.terms().is_empty() {
        return out;
    }
    let fft = FftPlanner::<f64>::new().plan_fft_inverse(m);
    let mut buf = vec![ZERO; m];
    for r in 0..d {
        buf.fill(ZERO);
        for (&l, b) in p.terms() {
            let e = b.entries();
            let v: Complex64 = (0..d).map(|c| e[r * d + c] * x[c]).sum();
            buf[l.rem_euclid(m as i64) as usize] += v;
        }
        fft.process(&mut buf);
        for (i, v) in buf.iter().enumerate() {
            out[i * d + r] = *v;
        }
    }
    out
}

/// The quadrature objective `x -> mean_m ||Q_m x||` over fixed samples `Q_m = P(t_m)`.
struct SotObjective {
    d: usize,
    samples: Vec<Complex64>,
}

impl SotObjective {
    fn points(&self) -> usize {
        self.samples.len() / (self.d * self.d)
    }

    fn value(&self, x: &[Complex64]) -> f64 {
        let d = self.d;
        let mut total = 0.0;
        for q in self.samples.chunks_exact(d * d) {
            total += mat_vec(d, q, x).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        }
        total / self.points() as f64
    }

    /// `mean_m Q_m^* Q_m x / ||Q_m x||`, the gradient of the objective with respect to `x`.
    fn gradient(&self, x: &[Complex64]) -> Vec<Complex64> {
        let d = self.d;
        let mut g = vec![ZERO; d];
        for q in self.samples.chunks_exact(d * d) {
            let qx = mat_vec(d, q, x);
            let n = qx.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 {
                continue;
            }
            for c in 0..d {
                let mut acc = ZERO;
                for r in 0..d {
                    acc += q[r * d + c].conj() * qx[r];
                }
                g[c] += acc / n;
            }
        }
        let m = self.points() as f64;
        g.iter_mut().for_each(|z| *z /= m);
        g
    }
}

fn mat_vec(d: usize, q: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    (0..d).map(|r| (0..d).map(|c| q[r * d + c] * x[c]).sum()).collect()
}

fn normalize(x: &mut [Complex64]) -> bool {
    let n = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|z| *z /= n);
    true
}

/// `sup_{||x|| = 1} (1/2pi) int ||P(t) x|| dt`, by multi-start projected gradient ascent.
/// The first starts are the coordinate vectors, the rest seeded Gaussian directions. The
/// search only ever sees feasible points, so the result is a lower bound.
pub fn l1_sot_norm(p: &SymbolPolynomial, grid: usize, opt: &OptimizerConfig, seed: u64) -> Result<NormEstimate> {
    check_grid(p, grid)?;
    if opt.starts == 0 || !(opt.step > 0.0) {
        return Err(Error::Precondition(
            "optimizer needs at least one start and a positive step".into(),
        ));
    }
    let d = p.dim();
    if p.terms().values().all(|b| b.is_zero()) {
        return Ok(NormEstimate::zero("projected_ascent"));
    }
    let objective = SotObjective {
        d,
        samples: p.sample_grid(grid),
    };
    let mut rng = seeded_rng(seed);
    let mut best: (f64, Vec<Complex64>) = (-1.0, Vec::new());
    let mut steps_taken = 0;

    for s in 0..opt.starts {
        let mut x = if s < d {
            let mut e = vec![ZERO; d];
            e[s] = Complex64::new(1.0, 0.0);
            e
        } else {
            random_vector(&mut rng, d)
        };
        if !normalize(&mut x) {
            continue;
        }
        let mut fx = objective.value(&x);
        let mut eta = opt.step;
        for _ in 0..opt.steps {
            steps_taken += 1;
            let g = objective.gradient(&x);
            let radial: Complex64 = x.iter().zip(&g).map(|(a, b)| a.conj() * b).sum();
            let mut cand: Vec<Complex64> = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| xi + (gi - xi * radial.re) * eta)
                .collect();
            if !normalize(&mut cand) {
                break;
            }
            let fc = objective.value(&cand);
            if fc > fx {
                x = cand;
                fx = fc;
            } else {
                eta *= 0.5;
                if eta < 1e-12 {
                    break;
                }
            }
        }
        if fx > best.0 {
            best = (fx, x);
        }
    }
    let x = best.1;
    let (value, change) = refine(grid, d, |m| {
        let v = vector_samples(p, &x, m);
        mean(
            &v.chunks_exact(d)
                .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
                .collect::<Vec<_>>(),
        )
    });
    Ok(NormEstimate::new(value, EstimateKind::LowerBound, "projected_ascent")
        .with_iterations(steps_taken)
        .with_residual(change))
}
