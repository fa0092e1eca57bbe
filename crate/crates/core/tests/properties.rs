use proptest::prelude::*;
use schurmult::norms::{operator_norm_dense, toeplitz_apply_fast};
use schurmult::random::{random_hvector, random_matrix, random_real_matrix, random_toeplitz_spec, seeded_rng};
use schurmult::{
    kernel_matrix, modulate, schur_product, smooth_fejer, BlockMatrix, Complex64, KernelSpec, OperatorBlock,
};

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 32,
        ..ProptestConfig::default()
    }
}

fn sum(parts: impl IntoIterator<Item = BlockMatrix>, d: usize, n: usize) -> BlockMatrix {
    parts
        .into_iter()
        .fold(BlockMatrix::zeros(d, n), |acc, p| acc.try_add(&p).unwrap())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn diagonals_rows_and_columns_partition(seed in any::<u64>(), d in 1usize..4, n in 1usize..9) {
        let a = random_matrix(&mut seeded_rng(seed), d, n);
        let nn = n as i64;
        let diags = sum((-(nn - 1)..nn).map(|l| a.extract_diagonal(l).unwrap()), d, n);
        let rows = sum((1..=n).map(|k| a.extract_row(k).unwrap()), d, n);
        let cols = sum((1..=n).map(|j| a.extract_column(j).unwrap()), d, n);
        prop_assert_eq!(diags.max_abs_diff(&a), 0.0);
        prop_assert_eq!(rows.max_abs_diff(&a), 0.0);
        prop_assert_eq!(cols.max_abs_diff(&a), 0.0);
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), d in 1usize..4, n in 1usize..9) {
        let a = random_matrix(&mut seeded_rng(seed), d, n);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn toeplitz_realizations_are_corner_consistent(seed in any::<u64>(), lo in -4i64..1, hi in 0i64..5, n in 1usize..10, extra in 1usize..5) {
        let spec = random_toeplitz_spec(&mut seeded_rng(seed), 2, lo, hi);
        prop_assert_eq!(spec.realize(n + extra).leading_corner(n).unwrap(), spec.realize(n));
    }

    #[test]
    fn schur_product_is_bilinear(seed in any::<u64>(), d in 1usize..4, n in 1usize..7, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let mut rng = seeded_rng(seed);
        let (a, a2, b) = (random_matrix(&mut rng, d, n), random_matrix(&mut rng, d, n), random_matrix(&mut rng, d, n));
        let c = Complex64::new(re, im);
        let lhs = schur_product(&a.scale(c).try_add(&a2).unwrap(), &b).unwrap();
        let rhs = schur_product(&a, &b).unwrap().scale(c).try_add(&schur_product(&a2, &b).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let lhs = schur_product(&b, &a.scale(c).try_add(&a2).unwrap()).unwrap();
        let rhs = schur_product(&b, &a).unwrap().scale(c).try_add(&schur_product(&b, &a2).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn scalar_kernels_associate(seed in any::<u64>(), d in 1usize..4, n in 1usize..8, order in 0usize..6) {
        let mut rng = seeded_rng(seed);
        let (a, b) = (random_matrix(&mut rng, d, n), random_matrix(&mut rng, d, n));
        let k = kernel_matrix(&KernelSpec::fejer(order), n, d).unwrap();
        let lhs = schur_product(&k, &schur_product(&a, &b).unwrap()).unwrap();
        let rhs = schur_product(&schur_product(&k, &a).unwrap(), &b).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn adjoint_reverses_schur_products(seed in any::<u64>(), d in 1usize..4, n in 1usize..8) {
        let mut rng = seeded_rng(seed);
        let (a, b) = (random_matrix(&mut rng, d, n), random_matrix(&mut rng, d, n));
        let lhs = schur_product(&a, &b).unwrap().adjoint();
        let rhs = schur_product(&b.adjoint(), &a.adjoint()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-13);
    }

    #[test]
    fn modulation_is_a_dirac_kernel_product(seed in any::<u64>(), t in 0.0f64..std::f64::consts::TAU) {
        let a = random_matrix(&mut seeded_rng(seed), 2, 6);
        let k = kernel_matrix(&KernelSpec::dirac(t), 6, 2).unwrap();
        prop_assert_eq!(modulate(&a, t).max_abs_diff(&schur_product(&k, &a).unwrap()), 0.0);
    }

    #[test]
    fn smoothing_acts_diagonal_by_diagonal(seed in any::<u64>(), n in 1usize..9, order in 0usize..10) {
        let a = random_matrix(&mut seeded_rng(seed), 2, n);
        let s = smooth_fejer(&a, order);
        for l in -(n as i64 - 1)..(n as i64) {
            let factor = if l.unsigned_abs() as usize <= order { 1.0 - l.abs() as f64 / (order + 1) as f64 } else { 0.0 };
            let expected = a.extract_diagonal(l).unwrap().scale(Complex64::new(factor, 0.0));
            prop_assert!(s.extract_diagonal(l).unwrap().max_abs_diff(&expected) < 1e-15);
        }
    }

    #[test]
    fn sup_entry_norm_is_the_largest_block_norm(seed in any::<u64>(), d in 1usize..5, n in 1usize..6) {
        let a = random_matrix(&mut seeded_rng(seed), d, n);
        let mut expected: f64 = 0.0;
        for k in 1..=n {
            for j in 1..=n {
                // Independent route: largest eigenvalue of B^* B.
                let b = a.block(k, j);
                let m = nalgebra::DMatrix::from_row_slice(d, d, b.entries());
                let gram = m.adjoint() * &m;
                let top = gram.symmetric_eigenvalues().iter().cloned().fold(0.0, f64::max);
                expected = expected.max(top.sqrt());
            }
        }
        prop_assert!((a.sup_entry_norm() - expected).abs() < 1e-12 * expected.max(1.0));
    }

    #[test]
    fn fft_path_matches_dense_apply(seed in any::<u64>(), d in 1usize..4, n in 1usize..40, lo in -6i64..1, hi in 0i64..7) {
        let mut rng = seeded_rng(seed);
        let spec = random_toeplitz_spec(&mut rng, d, lo, hi);
        let x = random_hvector(&mut rng, d, n);
        let dense = spec.realize(n).apply(&x).unwrap();
        prop_assert!(toeplitz_apply_fast(&spec, &x).unwrap().max_abs_diff(&dense) < 1e-10);
    }

    #[test]
    fn operator_norm_survives_modulation_and_adjoints(seed in any::<u64>(), d in 1usize..4, n in 1usize..10, t in 0.0f64..6.3) {
        let a = random_matrix(&mut seeded_rng(seed), d, n);
        let base = operator_norm_dense(&a).unwrap().value;
        prop_assert!((operator_norm_dense(&modulate(&a, t)).unwrap().value - base).abs() < 1e-8 * base.max(1.0));
        prop_assert!((operator_norm_dense(&a.adjoint()).unwrap().value - base).abs() < 1e-10 * base.max(1.0));
    }

    #[test]
    fn scalar_schur_products_are_submultiplicative(seed in any::<u64>(), n in 1usize..12) {
        let mut rng = seeded_rng(seed);
        let (a, b) = (random_real_matrix(&mut rng, 1, n), random_matrix(&mut rng, 1, n));
        let ab = operator_norm_dense(&schur_product(&a, &b).unwrap()).unwrap().value;
        let bound = operator_norm_dense(&a).unwrap().value * operator_norm_dense(&b).unwrap().value;
        prop_assert!(ab <= bound + 1e-9);
    }

    #[test]
    fn rank_one_blocks_compose_as_stated(seed in any::<u64>(), d in 1usize..5) {
        let mut rng = seeded_rng(seed);
        let (x, y) = (random_hvector(&mut rng, d, 1), random_hvector(&mut rng, d, 1));
        let t = schurmult::random::random_block(&mut rng, d);
        let p = OperatorBlock::rank_one(x.coord(1), y.coord(1)).unwrap();
        // T (x ⊗ y) = x ⊗ T(y) and (x ⊗ y) T = T^*(x) ⊗ y.
        let left = OperatorBlock::rank_one(x.coord(1), &t.apply(y.coord(1))).unwrap();
        let right = OperatorBlock::rank_one(&t.adjoint().apply(x.coord(1)), y.coord(1)).unwrap();
        prop_assert!(t.compose(&p).max_abs_diff(&left) < 1e-12);
        prop_assert!(p.compose(&t).max_abs_diff(&right) < 1e-12);
    }
}
