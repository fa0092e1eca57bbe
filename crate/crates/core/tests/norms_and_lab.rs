use std::f64::consts::PI;

use nalgebra::DMatrix;
use schurmult::corpus::builtin_corpus;
use schurmult::lab::{
    fejer_convergence_profile, l1_membership_verdict, poisson_convergence_profile, radii_for_orders,
    riemann_lebesgue_profile, NormMode, ProfileConfig, Verdict, VerdictRule,
};
use schurmult::norms::{
    l1_sot_norm, multiplier_lower_bound, multiplier_upper_bound, multiplier_upper_bound_with, operator_norm_dense,
    operator_norm_iterative, symbol_l1_norm, symbol_sup_norm, OptimizerConfig, ProbeConfig, ProbeSet, Side,
};
use schurmult::random::{random_hvector, random_matrix, random_symbol, seeded_rng};
use schurmult::{rank_one_matrix, toeplitz_from_symbol, BlockMatrix, SymbolPolynomial};

/// Spectral radius of the symmetric tridiagonal matrix with `1/2` off the diagonal, by a
/// symmetric eigensolver: a different algorithm from the SVD used by the norms.
fn tridiagonal_oracle(n: usize) -> f64 {
    let m = DMatrix::<f64>::from_fn(n, n, |r, c| if r.abs_diff(c) == 1 { 0.5 } else { 0.0 });
    m.symmetric_eigenvalues().iter().map(|v| v.abs()).fold(0.0, f64::max)
}

#[test]
fn cosine_toeplitz_norms_follow_the_closed_form() {
    let f = SymbolPolynomial::cosine(1);
    for n in [2usize, 8, 32, 64] {
        let closed = (PI / (n as f64 + 1.0)).cos();
        let oracle = tridiagonal_oracle(n);
        assert!((closed - oracle).abs() < 1e-12);
        let v = operator_norm_dense(&toeplitz_from_symbol(&f, n)).unwrap().value;
        assert!((v - closed).abs() < 1e-10, "N={n}: {v} vs {closed}");
        assert!(v <= symbol_sup_norm(&f, 8).unwrap() + 1e-12);
    }
}

#[test]
fn iterative_and_dense_agree() {
    let mut rng = seeded_rng(201);
    for i in 0..12 {
        let (d, n) = (1 + i % 4, 4 + 3 * i);
        let a = random_matrix(&mut rng, d, n);
        let dense = operator_norm_dense(&a).unwrap().value;
        let it = operator_norm_iterative(&a, 1e-10, 5000, i as u64).unwrap();
        assert!(
            (it.value - dense).abs() < 1e-8 * dense,
            "d={d} N={n}: {} vs {dense}",
            it.value
        );
    }
}

#[test]
fn rank_one_norms() {
    let mut rng = seeded_rng(202);
    for _ in 0..10 {
        let x = random_hvector(&mut rng, 3, 7);
        let y = random_hvector(&mut rng, 3, 7);
        let v = operator_norm_dense(&rank_one_matrix(&x, &y).unwrap()).unwrap().value;
        assert!((v - x.norm() * y.norm()).abs() < 1e-10);
    }
}

#[test]
fn corpus_sandwich_and_entry_floor() {
    for e in builtin_corpus(0) {
        let up = multiplier_upper_bound_with(&e.matrix, &e.hint).unwrap();
        let probes = ProbeSet::standard(e.matrix.dim(), e.matrix.size(), &ProbeConfig::default(), 7).unwrap();
        for side in [Side::Left, Side::Right] {
            let lo = multiplier_lower_bound(&e.matrix, side, &probes).unwrap();
            assert!(
                lo.value <= up.best() + 1e-9,
                "{} {side}: {} > {}",
                e.id,
                lo.value,
                up.best()
            );
            assert!(lo.value >= e.matrix.sup_entry_norm() - 1e-9, "{}", e.id);
        }
        let dual = multiplier_lower_bound(&e.matrix.adjoint(), Side::Right, &probes.adjoint())
            .unwrap()
            .value;
        let left = multiplier_lower_bound(&e.matrix, Side::Left, &probes).unwrap().value;
        assert!((dual - left).abs() <= 1e-10 * left.max(1.0), "{}", e.id);
    }
}

#[test]
fn sot_chain() {
    let mut rng = seeded_rng(203);
    for i in 0..6 {
        let d = 1 + i % 3;
        let p = random_symbol(&mut rng, d, 1 + (i as i64) % 6);
        let grid = p.min_grid().max(64);
        let sot = l1_sot_norm(&p, grid, &OptimizerConfig::default(), i as u64)
            .unwrap()
            .value;
        let l1 = symbol_l1_norm(&p, grid).unwrap();
        let up = multiplier_upper_bound(&toeplitz_from_symbol(&p, 64)).unwrap().value;
        assert!(sot <= l1 + 1e-8 && sot <= up + 1e-6, "{sot} {l1} {up}");
    }
}

#[test]
fn polynomial_fejer_residue_scales_like_one_over_n() {
    // For n >= degree, sigma_n(A_f) - A_f = -A_g / (n + 1) with g = sum |l| T_l e^{ilt},
    // so (n + 1) times the residue norm does not depend on n.
    let mut rng = seeded_rng(204);
    let f = random_symbol(&mut rng, 2, 3);
    let a = toeplitz_from_symbol(&f, 24);
    let orders = [3usize, 6, 12, 20];
    let p = fejer_convergence_profile(&a, &orders, &ProfileConfig::default()).unwrap();
    let scaled: Vec<f64> = p.values.iter().zip(orders).map(|(v, n)| v * (n + 1) as f64).collect();
    for s in &scaled {
        assert!((s - scaled[0]).abs() < 1e-10 * scaled[0]);
    }
    // Bracketed by the largest scaled diagonal and the sum of scaled diagonals.
    let diag: Vec<f64> = (-3i64..=3)
        .map(|l| l.abs() as f64 * f.fourier_coefficient(l).op_norm())
        .collect();
    let (lo, hi) = (diag.iter().cloned().fold(0.0, f64::max), diag.iter().sum::<f64>());
    assert!(scaled[0] >= lo - 1e-10 && scaled[0] <= hi + 1e-10);
    assert!(p.values.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn poisson_and_fejer_profiles_have_the_same_order() {
    let mut rng = seeded_rng(205);
    let a = toeplitz_from_symbol(&random_symbol(&mut rng, 1, 2), 128);
    let orders = [8usize, 16, 32];
    let fejer = fejer_convergence_profile(&a, &orders, &ProfileConfig::default()).unwrap();
    let radii: Vec<f64> = orders.iter().map(|&n| 1.0 - 1.0 / n as f64).collect();
    let poisson = poisson_convergence_profile(&a, &radii, &ProfileConfig::default()).unwrap();
    for (p, f) in poisson.values.iter().zip(&fejer.values) {
        assert!(p / f < 2.0 && f / p < 2.0, "{p} vs {f}");
    }
}

#[test]
fn fejer_and_poisson_verdicts_agree() {
    let orders = [1usize, 2, 4, 8, 16, 32, 64];
    let radii = radii_for_orders(&orders);
    let cfg = ProfileConfig::with_mode(NormMode::MultiplierUpper);
    for e in builtin_corpus(0) {
        let Some(spec) = &e.spec else { continue };
        if e.matrix.dim() > 1 && e.id.starts_with("ones") {
            continue;
        }
        let a = spec.realize(4 * 64);
        let f = fejer_convergence_profile(&a, &orders, &cfg).unwrap();
        let p = poisson_convergence_profile(&a, &radii, &cfg).unwrap();
        assert_eq!(f.verdict, p.verdict, "{}: {:?} vs {:?}", e.id, f.values, p.values);
    }
}

#[test]
fn sawtooth_diagonals_decay_like_one_over_l() {
    let a = toeplitz_from_symbol(&SymbolPolynomial::sawtooth(64), 80);
    let p = riemann_lebesgue_profile(&a, &VerdictRule::default());
    for (l, v) in p.grid.iter().zip(&p.values) {
        let l = l.abs();
        if (4.0..=32.0).contains(&l) {
            assert!((v * l - 1.0).abs() < 0.05);
        }
        if l > 64.0 {
            assert_eq!(*v, 0.0);
        }
    }
    assert_eq!(p.verdict, Verdict::DecreasingToZero);
}

#[test]
fn membership_of_the_ideal_and_non_membership_of_ones() {
    let orders = [2usize, 4, 8, 16, 32, 64];
    let mut rng = seeded_rng(206);
    let f = random_symbol(&mut rng, 1, 2);
    let b = random_matrix(&mut rng, 1, 256);
    let ideal = schurmult::schur_product(&b, &toeplitz_from_symbol(&f, 256)).unwrap();
    // B * A_f is banded but not Toeplitz; only the operator-norm route is available.
    assert_eq!(
        l1_membership_verdict(&ideal, &orders, 0.05).unwrap(),
        Verdict::DecreasingToZero
    );
    assert_eq!(
        l1_membership_verdict(&BlockMatrix::ones(1, 256), &orders, 0.05).unwrap(),
        Verdict::Bounded
    );
}
