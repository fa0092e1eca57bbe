//! Finite profiles standing in for limit statements: how far `sigma_n(A)`, `P_r(A)` and
//! the diagonals of `A` are from their limits as the parameter grows.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::BlockMatrix;
use crate::norms::{multiplier_lower_bound_seeded, multiplier_upper_bound, operator_norm, ProbeConfig, Side};
use crate::schur::{modulate, smooth_fejer, smooth_poisson};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    DecreasingToZero,
    Bounded,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::DecreasingToZero => "decreasing_to_zero",
            Verdict::Bounded => "bounded",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Decision thresholds. These are configuration, not claims about the limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictRule {
    /// Decreasing to zero: final value below `decay_ratio` times the largest value, and
    /// nonincreasing after the first point.
    pub decay_ratio: f64,
    /// Bounded: the last three values within this relative spread, above `floor`.
    pub plateau_spread: f64,
    pub floor: f64,
}

impl Default for VerdictRule {
    fn default() -> Self {
        Self {
            decay_ratio: 0.05,
            plateau_spread: 0.05,
            floor: 1e-12,
        }
    }
}

/// Slack for the monotonicity check, relative to the largest value.
const MONOTONE_SLACK: f64 = 1e-12;

pub fn classify(values: &[f64], rule: &VerdictRule) -> Verdict {
    if values.is_empty() {
        return Verdict::Inconclusive;
    }
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if peak <= rule.floor {
        return Verdict::DecreasingToZero;
    }
    let last = *values.last().unwrap();
    let tail_monotone = values.windows(2).skip(1).all(|w| w[1] <= w[0] + MONOTONE_SLACK * peak);
    if last < rule.decay_ratio * peak && tail_monotone {
        return Verdict::DecreasingToZero;
    }
    if values.len() >= 3 {
        let tail = &values[values.len() - 3..];
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        if lo > rule.floor && hi - lo <= rule.plateau_spread * hi {
            return Verdict::Bounded;
        }
    }
    Verdict::Inconclusive
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormMode {
    /// `||.||` at truncation.
    Operator,
    /// Certified multiplier upper bound only.
    MultiplierUpper,
    /// Certified multiplier upper bound, with the probe lower bound alongside.
    MultiplierBounds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceProfile {
    pub experiment: String,
    /// Name of the grid variable (`n`, `r`, `l`, `t`).
    pub parameter: String,
    pub grid: Vec<f64>,
    pub metric: String,
    pub values: Vec<f64>,
    /// Probe lower bounds, in [`NormMode::MultiplierBounds`].
    pub lower: Option<Vec<f64>>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileConfig {
    pub mode: NormMode,
    pub rule: VerdictRule,
    /// Seed of the probe draws in [`NormMode::MultiplierBounds`].
    pub seed: u64,
    pub probes: ProbeConfig,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self {
            mode: NormMode::Operator,
            rule: VerdictRule::default(),
            seed: 0,
            probes: ProbeConfig::default(),
        }
    }
}

impl ProfileConfig {
    pub fn with_mode(mode: NormMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

fn metric_name(mode: NormMode) -> &'static str {
    match mode {
        NormMode::Operator => "operator_norm",
        NormMode::MultiplierUpper | NormMode::MultiplierBounds => "multiplier_upper",
    }
}

fn measure(m: &BlockMatrix, cfg: &ProfileConfig) -> Result<(f64, Option<f64>)> {
    match cfg.mode {
        NormMode::Operator => Ok((operator_norm(m, 1e-10)?.value, None)),
        NormMode::MultiplierUpper => Ok((multiplier_upper_bound(m)?.value, None)),
        NormMode::MultiplierBounds => {
            let up = multiplier_upper_bound(m)?.value;
            let lo = multiplier_lower_bound_seeded(m, Side::Right, &cfg.probes, cfg.seed)?.value;
            Ok((up, Some(lo)))
        }
    }
}

fn build(
    experiment: &str,
    parameter: &str,
    grid: Vec<f64>,
    cfg: &ProfileConfig,
    mut residual: impl FnMut(usize) -> Result<BlockMatrix>,
) -> Result<ConvergenceProfile> {
    let mut values = Vec::with_capacity(grid.len());
    let mut lower = Vec::new();
    for i in 0..grid.len() {
        let (v, lo) = measure(&residual(i)?, cfg)?;
        values.push(v);
        lower.extend(lo);
    }
    let verdict = classify(&values, &cfg.rule);
    Ok(ConvergenceProfile {
        experiment: experiment.into(),
        parameter: parameter.into(),
        grid,
        metric: metric_name(cfg.mode).into(),
        values,
        lower: (cfg.mode == NormMode::MultiplierBounds).then_some(lower),
        verdict,
    })
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// `values[i] = ||sigma_{n_i}(A) - A||` in the chosen metric.
pub fn fejer_convergence_profile(a: &BlockMatrix, orders: &[usize], cfg: &ProfileConfig) -> Result<ConvergenceProfile> {
    let grid: Vec<f64> = orders.iter().map(|&n| n as f64).collect();
    if orders.is_empty() || !strictly_increasing(&grid) {
        return Err(Error::Precondition(
            "orders must be nonempty and strictly increasing".into(),
        ));
    }
    build("fejer", "n", grid, cfg, |i| smooth_fejer(a, orders[i]).try_sub(a))
}

/// `values[i] = ||P_{r_i}(A) - A||` in the chosen metric.
pub fn poisson_convergence_profile(a: &BlockMatrix, radii: &[f64], cfg: &ProfileConfig) -> Result<ConvergenceProfile> {
    if radii.is_empty() || !strictly_increasing(radii) || radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::Precondition(
            "radii must be nonempty, strictly increasing and inside (0, 1)".into(),
        ));
    }
    build("poisson", "r", radii.to_vec(), cfg, |i| {
        smooth_poisson(a, radii[i])?.try_sub(a)
    })
}

/// Radii `1 - 1/(n+1)` paired with Fejer orders `n`.
pub fn radii_for_orders(orders: &[usize]) -> Vec<f64> {
    orders.iter().map(|&n| 1.0 - 1.0 / (n as f64 + 1.0)).collect()
}

/// `values = ||D_l||` over the full band in the order `l = 0, -1, 1, -2, 2, ...`. A block
/// diagonal is a permuted block-diagonal operator, so its norm is the largest block norm.
pub fn riemann_lebesgue_profile(a: &BlockMatrix, rule: &VerdictRule) -> ConvergenceProfile {
    let n = a.size() as i64;
    let mut grid = vec![0.0];
    for m in 1..n {
        grid.push(-m as f64);
        grid.push(m as f64);
    }
    let values: Vec<f64> = grid.iter().map(|&l| a.diagonal_sup_norm(l as i64)).collect();
    let verdict = classify(&values, rule);
    ConvergenceProfile {
        experiment: "riemann_lebesgue".into(),
        parameter: "l".into(),
        grid,
        metric: "diagonal_norm".into(),
        values,
        lower: None,
        verdict,
    }
}

/// Membership heuristic for the `L^1` class: the certified multiplier upper bound of
/// `sigma_n(A) - A` must fall below `threshold` times its largest value and be
/// nonincreasing after the first order. Finite evidence only.
pub fn l1_membership_verdict(a: &BlockMatrix, orders: &[usize], threshold: f64) -> Result<Verdict> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "threshold",
            value: threshold,
            range: "(0, 1)",
        });
    }
    let first = orders.first().copied().unwrap_or(0);
    let last = orders.last().copied().unwrap_or(0);
    if first == 0 || last < 8 * first {
        return Err(Error::Precondition(
            "orders must start at n >= 1 and span at least three doublings".into(),
        ));
    }
    let cfg = ProfileConfig {
        mode: NormMode::MultiplierUpper,
        rule: VerdictRule {
            decay_ratio: threshold,
            ..VerdictRule::default()
        },
        ..ProfileConfig::default()
    };
    Ok(fejer_convergence_profile(a, orders, &cfg)?.verdict)
}

/// `values[i] = ||f_A(t_i) - A||`: the modulus of continuity of `t -> f_A(t)` at 0, in the
/// chosen metric. A surrogate for continuity in multiplier norm.
pub fn modulation_continuity_profile(
    a: &BlockMatrix,
    angles: &[f64],
    cfg: &ProfileConfig,
) -> Result<ConvergenceProfile> {
    let mut grid = angles.to_vec();
    grid.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    build("modulation", "t", grid.clone(), cfg, |i| {
        modulate(a, grid[i]).try_sub(a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, random_symbol, seeded_rng};
    use crate::schur::toeplitz_from_symbol;

    #[test]
    fn classification_rules() {
        let rule = VerdictRule::default();
        assert_eq!(classify(&[1.0, 0.5, 0.2, 0.01], &rule), Verdict::DecreasingToZero);
        assert_eq!(classify(&[0.0, 0.0], &rule), Verdict::DecreasingToZero);
        assert_eq!(classify(&[0.1, 1.0, 0.5, 0.01], &rule), Verdict::DecreasingToZero);
        assert_eq!(classify(&[1.0, 0.9, 0.89, 0.88], &rule), Verdict::Bounded);
        assert_eq!(classify(&[1.0, 0.01, 0.5, 0.02], &rule), Verdict::Inconclusive);
        assert_eq!(classify(&[], &rule), Verdict::Inconclusive);
    }

    #[test]
    fn fejer_profile_of_a_diagonal_is_exact() {
        let mut rng = seeded_rng(111);
        let a = random_matrix(&mut rng, 2, 12);
        for l in [0i64, 3, -5] {
            let dl = a.extract_diagonal(l).unwrap();
            let norm = dl.sup_entry_norm();
            let orders = [5usize, 8, 16, 40];
            let p = fejer_convergence_profile(&dl, &orders, &ProfileConfig::default()).unwrap();
            for (v, &n) in p.values.iter().zip(&orders) {
                let expected = l.unsigned_abs() as f64 / (n + 1) as f64 * norm;
                assert!((v - expected).abs() < 1e-12, "l={l}, n={n}: {v} vs {expected}");
            }
        }
    }

    #[test]
    fn poisson_profile_of_a_diagonal_and_zero() {
        let mut rng = seeded_rng(112);
        let dl = random_matrix(&mut rng, 1, 8).extract_diagonal(2).unwrap();
        let radii = [0.2, 0.5, 0.9];
        let p = poisson_convergence_profile(&dl, &radii, &ProfileConfig::default()).unwrap();
        for (v, r) in p.values.iter().zip(radii) {
            assert!((v - (1.0 - r * r) * dl.sup_entry_norm()).abs() < 1e-12);
        }
        let z = poisson_convergence_profile(&BlockMatrix::zeros(2, 4), &radii, &ProfileConfig::default()).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
        assert_eq!(z.verdict, Verdict::DecreasingToZero);
    }

    #[test]
    fn column_profile_does_not_vanish() {
        let n = 24;
        let col = BlockMatrix::from_fn(1, n, |_, j| {
            if j == 1 {
                crate::block::OperatorBlock::identity(1)
            } else {
                crate::block::OperatorBlock::zeros(1)
            }
        });
        let p = fejer_convergence_profile(&col, &[1, 2, 4], &ProfileConfig::default()).unwrap();
        assert!(p.values.iter().all(|&v| v > 0.5), "{:?}", p.values);
        assert_ne!(p.verdict, Verdict::DecreasingToZero);
    }

    #[test]
    fn polynomial_matrices_are_members_and_ones_is_not() {
        let mut rng = seeded_rng(113);
        let f = random_symbol(&mut rng, 2, 2);
        let orders = [2usize, 4, 8, 16, 32, 64];
        let a = toeplitz_from_symbol(&f, 256);
        assert_eq!(
            l1_membership_verdict(&a, &orders, 0.05).unwrap(),
            Verdict::DecreasingToZero
        );
        let one = BlockMatrix::ones(1, 256);
        assert_eq!(l1_membership_verdict(&one, &orders, 0.05).unwrap(), Verdict::Bounded);
        assert_eq!(
            l1_membership_verdict(&BlockMatrix::zeros(1, 8), &[1, 2, 4, 8], 0.05).unwrap(),
            Verdict::DecreasingToZero
        );
        assert!(l1_membership_verdict(&one, &[1, 2, 4], 0.05).is_err());
    }

    #[test]
    fn riemann_lebesgue_of_ones_is_constant() {
        let p = riemann_lebesgue_profile(&BlockMatrix::ones(2, 6), &VerdictRule::default());
        assert_eq!(p.values.len(), 11);
        assert!(p.values.iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert_eq!(p.verdict, Verdict::Bounded);
        assert_eq!(&p.grid[..5], &[0.0, -1.0, 1.0, -2.0, 2.0]);
    }

    #[test]
    fn multiplier_mode_records_both_bounds() {
        let mut rng = seeded_rng(114);
        let a = toeplitz_from_symbol(&random_symbol(&mut rng, 1, 2), 16);
        let p = fejer_convergence_profile(&a, &[2, 4], &ProfileConfig::with_mode(NormMode::MultiplierBounds)).unwrap();
        let lower = p.lower.unwrap();
        for (lo, up) in lower.iter().zip(&p.values) {
            assert!(lo <= &(up + 1e-9));
        }
    }

    #[test]
    fn bad_grids_are_rejected() {
        let a = BlockMatrix::ones(1, 4);
        assert!(fejer_convergence_profile(&a, &[3, 2], &ProfileConfig::default()).is_err());
        assert!(poisson_convergence_profile(&a, &[0.5, 1.0], &ProfileConfig::default()).is_err());
    }
}
