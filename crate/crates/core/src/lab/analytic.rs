//! Analytic extensions of upper-triangular matrices into the disc:
//! `F_A(z) = sum_l D_l z^l` (a matrix) and, for Toeplitz data, `G_A(z) = sum_l T_l z^l`
//! (a single block), with Hardy-norm estimates from boundary values.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::block::OperatorBlock;
use crate::error::{Error, Result};
use crate::matrix::{BlockMatrix, StructureTag};
use crate::norms::{operator_norm, symbol_l1_norm, symbol_sup_norm};
use crate::schur::{modulate, poisson_weights};
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSample<T> {
    pub z: Complex64,
    pub value: T,
}

fn check_upper(a: &BlockMatrix) -> Result<()> {
    if a.structure() == StructureTag::UpperTriangular {
        return Ok(());
    }
    let n = a.size();
    for k in 2..=n {
        for j in 1..k {
            if !a.block_is_zero(k, j) {
                return Err(Error::NotUpperTriangular { k, j });
            }
        }
    }
    Ok(())
}

/// `F_A(r e^{it}) = M_{P_r} * M_t * A`, i.e. diagonal `l` scaled by `r^l e^{ilt}`.
pub fn diagonal_extension(a: &BlockMatrix, z: Complex64) -> Result<BlockMatrix> {
    check_upper(a)?;
    let r = z.norm();
    if !(r < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "|z|",
            value: r,
            range: "[0, 1)",
        });
    }
    let t = z.arg().rem_euclid(2.0 * PI);
    Ok(modulate(&poisson_weights(a, r), t))
}

pub fn diagonal_sample(a: &BlockMatrix, z: Complex64) -> Result<AnalyticSample<BlockMatrix>> {
    Ok(AnalyticSample {
        z,
        value: diagonal_extension(a, z)?,
    })
}

fn check_spec(spec: &ToeplitzSpec) -> Result<()> {
    if let Some((&l, _)) = spec.coefficients().iter().find(|(&l, b)| l < 0 && !b.is_zero()) {
        return Err(Error::NegativeBand { offset: l });
    }
    Ok(())
}

/// `G_A(z) = sum_l T_l z^l` for `|z| <= 1`.
pub fn coefficient_extension(spec: &ToeplitzSpec, z: Complex64) -> Result<OperatorBlock> {
    check_spec(spec)?;
    if !(z.norm() <= 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "|z|",
            value: z.norm(),
            range: "[0, 1]",
        });
    }
    let mut acc = OperatorBlock::zeros(spec.dim());
    for (&l, b) in spec.coefficients() {
        acc = &acc + &b.scale(z.powu(l as u32));
    }
    Ok(acc)
}

pub fn coefficient_sample(spec: &ToeplitzSpec, z: Complex64) -> Result<AnalyticSample<OperatorBlock>> {
    Ok(AnalyticSample {
        z,
        value: coefficient_extension(spec, z)?,
    })
}

/// `t -> G_A(r e^{it})` as a trigonometric polynomial.
fn circle_symbol(spec: &ToeplitzSpec, r: f64) -> SymbolPolynomial {
    let terms: BTreeMap<i64, OperatorBlock> = spec
        .coefficients()
        .iter()
        .map(|(&l, b)| (l, b.scale(Complex64::new(r.powi(l as i32), 0.0))))
        .collect();
    SymbolPolynomial::new(spec.dim(), terms).expect("coefficients share the dimension")
}

fn grid_for(f: &SymbolPolynomial, grid: usize) -> usize {
    grid.max(f.min_grid())
}

/// `sup_{|z| < 1} ||G_A(z)||`, which for a polynomial is the maximum on the circle.
pub fn h_infinity_norm(spec: &ToeplitzSpec, grid: usize) -> Result<f64> {
    check_spec(spec)?;
    let f = circle_symbol(spec, 1.0);
    symbol_sup_norm(&f, grid_for(&f, grid))
}

/// `sup_r (1/2pi) int ||G_A(r e^{it})|| dt`, attained at `r = 1` for a polynomial.
pub fn h1_norm(spec: &ToeplitzSpec, grid: usize) -> Result<f64> {
    check_spec(spec)?;
    let f = circle_symbol(spec, 1.0);
    symbol_l1_norm(&f, grid_for(&f, grid))
}

/// `(r, mean_t ||G_A(r e^{it})||)` over the given radii in `[0, 1]`.
pub fn h1_radial_profile(spec: &ToeplitzSpec, radii: &[f64], grid: usize) -> Result<Vec<(f64, f64)>> {
    check_spec(spec)?;
    radii
        .iter()
        .map(|&r| {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::ParameterOutOfRange {
                    name: "r",
                    value: r,
                    range: "[0, 1]",
                });
            }
            let f = circle_symbol(spec, r);
            Ok((r, symbol_l1_norm(&f, grid_for(&f, grid))?))
        })
        .collect()
}

/// `(r, max_t ||F_A(r e^{it})||)` with `t` on `angles` equispaced points.
pub fn diagonal_extension_profile(a: &BlockMatrix, radii: &[f64], angles: usize) -> Result<Vec<(f64, f64)>> {
    let angles = angles.max(1);
    radii
        .iter()
        .map(|&r| {
            let mut best: f64 = 0.0;
            for m in 0..angles {
                let z = Complex64::from_polar(r, 2.0 * PI * m as f64 / angles as f64);
                best = best.max(operator_norm(&diagonal_extension(a, z)?, 1e-10)?.value);
            }
            Ok((r, best))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_block, random_matrix, random_toeplitz_spec, seeded_rng};
    use crate::schur::smooth_poisson;

    fn upper(a: &BlockMatrix) -> BlockMatrix {
        let n = a.size() as i64;
        let mut acc = BlockMatrix::zeros(a.dim(), a.size());
        for l in 0..n {
            acc = acc.try_add(&a.extract_diagonal(l).unwrap()).unwrap();
        }
        acc.with_structure(StructureTag::UpperTriangular).unwrap()
    }

    #[test]
    fn extension_matches_direct_sum() {
        let mut rng = seeded_rng(121);
        let a = upper(&random_matrix(&mut rng, 2, 5));
        let z = Complex64::from_polar(0.7, 2.2);
        let f = diagonal_extension(&a, z).unwrap();
        let mut direct = BlockMatrix::zeros(2, 5);
        for l in 0..5i64 {
            direct = direct
                .try_add(&a.extract_diagonal(l).unwrap().scale(z.powu(l as u32)))
                .unwrap();
        }
        assert!(f.max_abs_diff(&direct) < 1e-12);
        let via_ops = modulate(&smooth_poisson(&a, 0.7).unwrap(), 2.2);
        assert!(f.max_abs_diff(&via_ops) < 1e-12);
    }

    #[test]
    fn extension_at_zero_is_the_main_diagonal() {
        let mut rng = seeded_rng(122);
        let a = upper(&random_matrix(&mut rng, 2, 4));
        let f = diagonal_extension(&a, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(f.max_abs_diff(&a.extract_diagonal(0).unwrap()), 0.0);
    }

    #[test]
    fn extension_preconditions() {
        let mut rng = seeded_rng(123);
        let a = random_matrix(&mut rng, 1, 4);
        assert!(matches!(
            diagonal_extension(&a, Complex64::new(0.5, 0.0)),
            Err(Error::NotUpperTriangular { .. })
        ));
        let u = upper(&a);
        assert!(diagonal_extension(&u, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn single_coefficient_extension() {
        let mut rng = seeded_rng(124);
        let t = random_block(&mut rng, 2);
        let spec = ToeplitzSpec::from_coefficients(2, BTreeMap::from([(1, t.clone())])).unwrap();
        let z = Complex64::new(0.3, -0.4);
        assert!(coefficient_extension(&spec, z).unwrap().max_abs_diff(&t.scale(z)) < 1e-15);
        assert!((h_infinity_norm(&spec, 16).unwrap() - t.op_norm()).abs() < 1e-12);
        assert!((h1_norm(&spec, 16).unwrap() - t.op_norm()).abs() < 1e-12);
    }

    #[test]
    fn one_plus_z() {
        let one = OperatorBlock::identity(1);
        let spec = ToeplitzSpec::from_coefficients(1, BTreeMap::from([(0, one.clone()), (1, one)])).unwrap();
        assert!((h_infinity_norm(&spec, 8).unwrap() - 2.0).abs() < 1e-10);
        assert!((h1_norm(&spec, 8).unwrap() - 4.0 / PI).abs() < 1e-6);
    }

    #[test]
    fn negative_band_is_rejected() {
        let mut rng = seeded_rng(125);
        let spec = random_toeplitz_spec(&mut rng, 1, -1, 1);
        assert!(matches!(h1_norm(&spec, 8), Err(Error::NegativeBand { offset: -1 })));
        assert!(coefficient_extension(&spec, Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn radial_profiles_are_nondecreasing() {
        let mut rng = seeded_rng(126);
        let spec = random_toeplitz_spec(&mut rng, 2, 0, 3);
        let radii = [0.0, 0.3, 0.6, 0.9, 1.0];
        let h1 = h1_radial_profile(&spec, &radii, 32).unwrap();
        assert!(h1.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9));
        let a = spec.realize(6).with_structure(StructureTag::UpperTriangular).unwrap();
        let f = diagonal_extension_profile(&a, &radii[..4], 8).unwrap();
        assert!(f.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-9));
    }
}
