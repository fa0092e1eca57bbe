//! Two-sided bounds for the Schur multiplier norms
//! `||A||_{M_r} = sup ||B * A|| / ||B||` and `||A||_{M_l} = sup ||A * B|| / ||B||`.
//!
//! Lower bounds come from explicit probes `B` with `||B|| = 1`; every probe value is
//! attained, so the maximum is certified. Upper bounds come from `||A||_{M} <= ||A||` and,
//! for Toeplitz matrices, from the `L^1` norm of a symbol.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;
use crate::matrix::{BlockMatrix, StructureTag};
use crate::random::{random_hvector, random_matrix, seeded_rng};
use crate::schur::{kernel_matrix, rank_one_matrix, schur_product, toeplitz_from_symbol};
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;

use super::estimate::{EstimateKind, NormEstimate};
use super::symbol_norms::{default_grid, periodic_mean, symbol_l1_norm};
use super::{operator_norm, operator_norm_upper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `A * B`: `A` multiplies from the left.
    Left,
    /// `B * A`.
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            other => Err(Error::Precondition(format!("unknown side `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    /// Identity placed at a single position `(k, j)`, for every position. These are
    /// evaluated in closed form: `||E_kj * A|| = ||T_kj||`.
    pub entry_probes: bool,
    /// Include `1 / N`, the normalized all-identity matrix.
    pub ones: bool,
    /// Number of angles `t = 2 pi m / angles` for `M_t / N`.
    pub angles: usize,
    pub gaussian: usize,
    pub rank_one: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            entry_probes: true,
            ones: true,
            angles: 4,
            gaussian: 4,
            rank_one: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub label: String,
    /// Normalized to operator norm 1.
    pub matrix: BlockMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    dim: usize,
    size: usize,
    entry_probes: bool,
    probes: Vec<Probe>,
}

impl ProbeSet {
    /// The standard families: entry probes, `1`, Dirac kernels, Gaussian and rank-one
    /// matrices, all drawn from `seed`.
    pub fn standard(dim: usize, size: usize, cfg: &ProbeConfig, seed: u64) -> Result<Self> {
        if dim == 0 || size == 0 {
            return Err(Error::Precondition("probe shape must be positive".into()));
        }
        let mut raw: Vec<(String, BlockMatrix)> = Vec::new();
        if cfg.ones {
            raw.push(("ones".into(), BlockMatrix::ones(dim, size)));
        }
        for m in 0..cfg.angles {
            let t = 2.0 * PI * m as f64 / cfg.angles as f64;
            raw.push((format!("dirac#{m}"), kernel_matrix(&KernelSpec::dirac(t), size, dim)?));
        }
        let mut rng = seeded_rng(seed);
        for g in 0..cfg.gaussian {
            raw.push((format!("gaussian#{g}"), random_matrix(&mut rng, dim, size)));
        }
        for r in 0..cfg.rank_one {
            let x = random_hvector(&mut rng, dim, size);
            let y = random_hvector(&mut rng, dim, size);
            raw.push((format!("rank_one#{r}"), rank_one_matrix(&x, &y)?));
        }
        let mut set = Self::from_matrices(dim, size, raw)?;
        set.entry_probes = cfg.entry_probes;
        Ok(set)
    }

    /// Normalizes each matrix by its operator norm. Zero matrices are rejected.
    pub fn from_matrices(dim: usize, size: usize, matrices: Vec<(String, BlockMatrix)>) -> Result<Self> {
        let mut probes = Vec::with_capacity(matrices.len());
        for (label, b) in matrices {
            if b.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: b.dim(),
                });
            }
            if b.size() != size {
                return Err(Error::SizeMismatch {
                    expected: size,
                    actual: b.size(),
                });
            }
            let nb = operator_norm(&b, 1e-8)?.value;
            if nb == 0.0 {
                return Err(Error::Precondition(format!("probe `{label}` is zero")));
            }
            let matrix = b.scale(Complex64::new(1.0 / nb, 0.0));
            probes.push(Probe { label, matrix });
        }
        Ok(Self {
            dim,
            size,
            entry_probes: false,
            probes,
        })
    }

    pub fn with_entry_probes(mut self, on: bool) -> Self {
        self.entry_probes = on;
        self
    }

    /// The probes `B^*`. Since `B^* * A^* = (A * B)^*`, bounding `A^*` from the right with
    /// these gives the same values as bounding `A` from the left with the originals.
    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            size: self.size,
            entry_probes: self.entry_probes,
            probes: self
                .probes
                .iter()
                .map(|p| Probe {
                    label: format!("{}*", p.label),
                    matrix: p.matrix.adjoint(),
                })
                .collect(),
        }
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    pub fn has_entry_probes(&self) -> bool {
        self.entry_probes
    }

    /// Number of probes, counting the `N^2` entry probes.
    pub fn len(&self) -> usize {
        self.probes.len() + if self.entry_probes { self.size * self.size } else { 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `max_B ||B * A||` (right) or `max_B ||A * B||` (left) over the probe set.
pub fn multiplier_lower_bound(a: &BlockMatrix, side: Side, probes: &ProbeSet) -> Result<NormEstimate> {
    if probes.is_empty() {
        return Err(Error::EmptyProbeSet);
    }
    if probes.dim != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: probes.dim,
        });
    }
    if probes.size != a.size() {
        return Err(Error::SizeMismatch {
            expected: a.size(),
            actual: probes.size,
        });
    }
    if a.is_zero() {
        return Ok(NormEstimate::zero("zero_matrix"));
    }

    let mut best = (f64::NEG_INFINITY, String::new());
    let mut residual: f64 = 0.0;
    if probes.entry_probes {
        let n = a.size();
        for k in 1..=n {
            for j in 1..=n {
                let v = a.block(k, j).op_norm();
                if v > best.0 {
                    best = (v, format!("entry({k},{j})"));
                }
            }
        }
    }
    for p in &probes.probes {
        let prod = match side {
            Side::Right => schur_product(&p.matrix, a)?,
            Side::Left => schur_product(a, &p.matrix)?,
        };
        let e = operator_norm(&prod, 1e-8)?;
        residual = residual.max(e.residual);
        if e.value > best.0 {
            best = (e.value, p.label.clone());
        }
    }
    Ok(
        NormEstimate::new(best.0, EstimateKind::LowerBound, format!("probe:{}", best.1))
            .with_iterations(probes.len())
            .with_residual(residual),
    )
}

/// Seeded standard probes, then [`multiplier_lower_bound`].
pub fn multiplier_lower_bound_seeded(
    a: &BlockMatrix,
    side: Side,
    cfg: &ProbeConfig,
    seed: u64,
) -> Result<NormEstimate> {
    let probes = ProbeSet::standard(a.dim(), a.size(), cfg, seed)?;
    multiplier_lower_bound(a, side, &probes)
}

/// Extra knowledge about how a matrix was built, used to tighten the upper bound.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundHint {
    None,
    /// The matrix is `A_f` for this symbol.
    Symbol(SymbolPolynomial),
    /// The matrix is `M_eta` for this kernel.
    Kernel(KernelSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierUpperBound {
    pub bound: NormEstimate,
    /// Set when the multiplier norm is known exactly although no finite computation here
    /// certifies it (a Dirac kernel is a diagonal-unitary conjugation, norm 1).
    pub exact_value: Option<f64>,
}

impl MultiplierUpperBound {
    /// The smallest certified value: the exact value when known, else the bound.
    pub fn best(&self) -> f64 {
        self.exact_value.map_or(self.bound.value, |v| v.min(self.bound.value))
    }
}

/// `||A||_M <= ||A||`, tightened for Toeplitz-tagged inputs by the `L^1` norm of their
/// diagonal symbol `sum_{|l| < N} T_l e^{ilt}`: the truncation is a corner of `A_f` for
/// that symbol, and corners never increase multiplier norms.
pub fn multiplier_upper_bound(a: &BlockMatrix) -> Result<NormEstimate> {
    let mut bound = operator_norm_upper(a)?;
    if bound.value > 0.0 && a.structure() == StructureTag::Toeplitz {
        let f = SymbolPolynomial::from_toeplitz(&ToeplitzSpec::from_matrix(a)?);
        let l1 = symbol_l1_norm(&f, default_grid(&f))?;
        if l1 < bound.value {
            bound = NormEstimate::new(l1, EstimateKind::UpperBound, "symbol_l1");
        }
    }
    Ok(bound)
}

pub fn multiplier_upper_bound_with(a: &BlockMatrix, hint: &BoundHint) -> Result<MultiplierUpperBound> {
    let base = multiplier_upper_bound(a)?;
    let n = a.size();
    let mut out = MultiplierUpperBound {
        bound: base,
        exact_value: None,
    };
    let tighten = |out: &mut MultiplierUpperBound, value: f64, method: &str| {
        if value < out.bound.value {
            out.bound = NormEstimate::new(value, EstimateKind::UpperBound, method);
        }
    };
    match hint {
        BoundHint::None => {}
        BoundHint::Symbol(f) => {
            if toeplitz_from_symbol(f, n).max_abs_diff(a) != 0.0 || f.dim() != a.dim() {
                return Err(Error::Precondition(
                    "matrix is not the Toeplitz matrix of the given symbol".into(),
                ));
            }
            tighten(&mut out, symbol_l1_norm(f, default_grid(f))?, "symbol_l1");
        }
        BoundHint::Kernel(k) => {
            if kernel_matrix(k, n, a.dim())?.max_abs_diff(a) != 0.0 {
                return Err(Error::Precondition(format!(
                    "matrix is not the kernel matrix of {}",
                    k.name()
                )));
            }
            match k {
                KernelSpec::Poisson { .. } | KernelSpec::Fejer { .. } => {
                    let density = |t: f64| k.density(t).expect("kernel has a density").abs();
                    tighten(&mut out, periodic_mean(density, 64), "kernel_l1");
                }
                KernelSpec::Dirac { .. } => out.exact_value = Some(1.0),
                KernelSpec::Custom { .. } => {}
            }
        }
    }
    Ok(out)
}
