//! Summability kernels and point masses, described by their Fourier coefficients.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::block::OperatorBlock;
use crate::error::{Error, Result};
use crate::symbol::SymbolPolynomial;

#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    /// `K_n`, coefficients `1 - |l|/(n+1)` for `|l| <= n`.
    Fejer { order: usize },
    /// `P_r`, coefficients `r^|l|`.
    Poisson { radius: f64 },
    /// Point mass whose Toeplitz matrix is `M_t = (e^{i(j-k)t} Id)`. The angle is kept
    /// as given; coefficients are formed on demand.
    Dirac { angle: f64 },
    /// Finitely supported coefficient list; unlisted offsets are zero.
    Custom { coeffs: BTreeMap<i64, Complex64> },
}

impl KernelSpec {
    pub fn fejer(order: usize) -> Self {
        KernelSpec::Fejer { order }
    }

    pub fn poisson(radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(KernelSpec::Poisson { radius })
    }

    pub fn dirac(angle: f64) -> Self {
        KernelSpec::Dirac { angle }
    }

    pub fn custom(coeffs: BTreeMap<i64, Complex64>) -> Self {
        KernelSpec::Custom { coeffs }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            KernelSpec::Poisson { radius } => check_radius(*radius),
            KernelSpec::Dirac { angle } if !angle.is_finite() => Err(Error::NonFinite {
                value: angle.to_string(),
            }),
            _ => Ok(()),
        }
    }

    pub fn coefficient(&self, l: i64) -> Complex64 {
        match self {
            KernelSpec::Fejer { order } => Complex64::new(fejer_factor(*order, l), 0.0),
            KernelSpec::Poisson { radius } => Complex64::new(radius.powi(l.unsigned_abs() as i32), 0.0),
            KernelSpec::Dirac { angle } => dirac_coefficient(*angle, l),
            KernelSpec::Custom { coeffs } => coeffs.get(&l).copied().unwrap_or_default(),
        }
    }

    /// Largest `|l|` with a nonzero coefficient, `None` for kernels of unbounded support.
    pub fn bandwidth(&self) -> Option<usize> {
        match self {
            KernelSpec::Fejer { order } => Some(*order),
            KernelSpec::Custom { coeffs } => Some(
                coeffs
                    .iter()
                    .filter(|(_, c)| **c != Complex64::default())
                    .map(|(l, _)| l.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0),
            ),
            KernelSpec::Poisson { .. } | KernelSpec::Dirac { .. } => None,
        }
    }

    /// Pointwise value of the kernel density at `t`, when the kernel has one.
    pub fn density(&self, t: f64) -> Option<f64> {
        match self {
            KernelSpec::Fejer { order } => {
                let n1 = (*order + 1) as f64;
                let s = (t / 2.0).sin();
                if s.abs() < 1e-12 {
                    Some(n1)
                } else {
                    let num = (n1 * t / 2.0).sin();
                    Some(num * num / (n1 * s * s))
                }
            }
            KernelSpec::Poisson { radius } => {
                let r = *radius;
                Some((1.0 - r * r) / (1.0 - 2.0 * r * t.cos() + r * r))
            }
            KernelSpec::Dirac { .. } | KernelSpec::Custom { .. } => None,
        }
    }

    /// Symbol `sum_{|l| <= degree} c_l e^{ilt} Id`, truncated at `degree`.
    pub fn to_symbol(&self, dim: usize, degree: usize) -> SymbolPolynomial {
        let degree = match self.bandwidth() {
            Some(b) => b.min(degree),
            None => degree,
        } as i64;
        let terms: BTreeMap<i64, OperatorBlock> = (-degree..=degree)
            .map(|l| (l, OperatorBlock::scalar(dim, self.coefficient(l))))
            .filter(|(_, b)| !b.is_zero())
            .collect();
        SymbolPolynomial::new(dim, terms).expect("scalar blocks share the dimension")
    }

    pub fn name(&self) -> String {
        match self {
            KernelSpec::Fejer { order } => format!("fejer({order})"),
            KernelSpec::Poisson { radius } => format!("poisson({radius})"),
            KernelSpec::Dirac { angle } => format!("dirac({angle})"),
            KernelSpec::Custom { coeffs } => format!("custom({} terms)", coeffs.len()),
        }
    }
}

/// `max(0, 1 - |l|/(n+1))`.
pub fn fejer_factor(order: usize, l: i64) -> f64 {
    let a = l.unsigned_abs() as usize;
    if a > order {
        0.0
    } else {
        // (n + 1 - |l|) / (n + 1) rounds once; 1 - |l|/(n + 1) would round twice.
        (order + 1 - a) as f64 / (order + 1) as f64
    }
}

/// `e^{i l t}`.
pub(crate) fn dirac_coefficient(angle: f64, l: i64) -> Complex64 {
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // Reduce the phase so large |l| does not lose the angle to rounding.
    let phase = (l as f64 * angle).rem_euclid(2.0 * PI);
    Complex64::from_polar(1.0, phase)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name: "r",
            value: r,
            range: "(0, 1)",
        })
    }
}
