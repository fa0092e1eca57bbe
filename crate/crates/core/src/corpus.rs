//! A fixed, seeded collection of small test matrices covering every structure the
//! crate knows about: dense, single diagonals, rows and columns, rank-one, Toeplitz
//! with symbols, kernel matrices and upper-triangular data.

use std::collections::BTreeMap;

use crate::block::OperatorBlock;
use crate::kernel::KernelSpec;
use crate::matrix::{BlockMatrix, StructureTag};
use crate::norms::BoundHint;
use crate::random::{
    random_block, random_hvector, random_matrix, random_real_matrix, random_symbol, random_toeplitz_spec, seeded_rng,
};
use crate::schur::{kernel_matrix, rank_one_matrix, schur_product, toeplitz_from_symbol};
use crate::symbol::SymbolPolynomial;
use crate::toeplitz::ToeplitzSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub id: String,
    pub matrix: BlockMatrix,
    pub hint: BoundHint,
    /// Toeplitz data behind the matrix, when there is any.
    pub spec: Option<ToeplitzSpec>,
}

impl CorpusEntry {
    fn plain(id: &str, matrix: BlockMatrix) -> Self {
        Self {
            id: id.into(),
            matrix,
            hint: BoundHint::None,
            spec: None,
        }
    }

    fn from_symbol(id: &str, f: SymbolPolynomial, n: usize) -> Self {
        Self {
            id: id.into(),
            matrix: toeplitz_from_symbol(&f, n),
            spec: Some(f.to_toeplitz()),
            hint: BoundHint::Symbol(f),
        }
    }

    fn from_kernel(id: &str, k: KernelSpec, n: usize, d: usize) -> Self {
        let matrix = kernel_matrix(&k, n, d).expect("corpus kernels are valid");
        Self {
            id: id.into(),
            spec: Some(ToeplitzSpec::from_matrix(&matrix).expect("kernel matrices are Toeplitz")),
            matrix,
            hint: BoundHint::Kernel(k),
        }
    }

    /// True when the Toeplitz data only has offsets `l >= 0`.
    pub fn is_analytic(&self) -> bool {
        self.spec
            .as_ref()
            .is_some_and(|s| s.coefficients().iter().all(|(&l, b)| l >= 0 || b.is_zero()))
    }
}

pub fn builtin_corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();

    out.push(CorpusEntry::plain("zero", BlockMatrix::zeros(2, 6)));
    out.push(CorpusEntry::plain("identity_d2", BlockMatrix::identity(2, 10)));
    out.push(CorpusEntry {
        spec: Some(ToeplitzSpec::from_matrix(&BlockMatrix::ones(1, 16)).unwrap()),
        ..CorpusEntry::plain("ones_d1", BlockMatrix::ones(1, 16))
    });
    out.push(CorpusEntry {
        spec: Some(ToeplitzSpec::from_matrix(&BlockMatrix::ones(2, 8)).unwrap()),
        ..CorpusEntry::plain("ones_d2", BlockMatrix::ones(2, 8))
    });
    out.push(CorpusEntry::plain("gaussian_d2", random_matrix(&mut rng, 2, 10)));
    out.push(CorpusEntry::plain(
        "gaussian_real_d1",
        random_real_matrix(&mut rng, 1, 16),
    ));

    let base = random_matrix(&mut rng, 2, 12);
    out.push(CorpusEntry::plain("diagonal_plus2", base.extract_diagonal(2).unwrap()));
    out.push(CorpusEntry::plain(
        "diagonal_minus5",
        base.extract_diagonal(-5).unwrap(),
    ));
    out.push(CorpusEntry::plain("column_3", base.extract_column(3).unwrap()));
    out.push(CorpusEntry::plain("row_7", base.extract_row(7).unwrap()));
    let t = random_block(&mut rng, 3);
    out.push(CorpusEntry::plain(
        "single_block_d3",
        BlockMatrix::from_blocks(3, 6, [((2, 5), t)]).unwrap(),
    ));

    let x = random_hvector(&mut rng, 2, 10);
    let y = random_hvector(&mut rng, 2, 10);
    out.push(CorpusEntry::plain("rank_one_d2", rank_one_matrix(&x, &y).unwrap()));

    let upper = {
        let a = random_matrix(&mut rng, 2, 8);
        let mut acc = BlockMatrix::zeros(2, 8);
        for l in 0..8 {
            acc = acc.try_add(&a.extract_diagonal(l).unwrap()).unwrap();
        }
        acc.with_structure(StructureTag::UpperTriangular).unwrap()
    };
    out.push(CorpusEntry::plain("upper_triangular_d2", upper));

    out.push(CorpusEntry::from_symbol("cosine_d1", SymbolPolynomial::cosine(1), 32));
    out.push(CorpusEntry::from_symbol(
        "sawtooth_8",
        SymbolPolynomial::sawtooth(8),
        24,
    ));
    let f = random_symbol(&mut rng, 2, 2);
    out.push(CorpusEntry::from_symbol("symbol_deg2_d2", f.clone(), 16));
    let analytic = random_toeplitz_spec(&mut rng, 2, 0, 3);
    out.push(CorpusEntry::from_symbol(
        "analytic_deg3_d2",
        SymbolPolynomial::from_toeplitz(&analytic),
        12,
    ));
    let one_plus_z = SymbolPolynomial::new(
        1,
        BTreeMap::from([(0, OperatorBlock::identity(1)), (1, OperatorBlock::identity(1))]),
    )
    .unwrap();
    out.push(CorpusEntry::from_symbol("one_plus_z", one_plus_z, 16));

    out.push(CorpusEntry::from_kernel("fejer_4", KernelSpec::fejer(4), 16, 1));
    out.push(CorpusEntry::from_kernel(
        "poisson_0.7_d2",
        KernelSpec::Poisson { radius: 0.7 },
        10,
        2,
    ));
    out.push(CorpusEntry::from_kernel("dirac_1.1", KernelSpec::dirac(1.1), 16, 1));

    // Right ideal: B * A with A polynomial stays polynomial.
    let b = random_matrix(&mut rng, 2, 16);
    let a = toeplitz_from_symbol(&f, 16);
    out.push(CorpusEntry::plain("ideal_b_times_poly", schur_product(&b, &a).unwrap()));

    out
}
