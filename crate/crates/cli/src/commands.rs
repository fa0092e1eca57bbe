//! The four commands. Each returns its report as a string and touches the file system
//! only to read inputs; [`crate::execute`] does the writing.

use std::path::PathBuf;

use schurmult::corpus::{builtin_corpus, CorpusEntry};
use schurmult::format::{parse_document, write_matrix, write_toeplitz, SpecDocument};
use schurmult::lab::{
    fejer_convergence_profile, l1_membership_verdict, poisson_convergence_profile, radii_for_orders,
    riemann_lebesgue_profile, ConvergenceProfile, NormMode, ProfileConfig, VerdictRule,
};
use schurmult::norms::symbol_norms::{default_grid, REFINE_TOL};
use schurmult::norms::{
    format_real, l1_sot_norm, multiplier_lower_bound, multiplier_lower_bound_seeded, multiplier_upper_bound_with,
    operator_norm, operator_norm_iterative, symbol_l1_norm, symbol_sup_norm, toeplitz_apply_fast, BoundHint,
    OptimizerConfig, PowerConfig, ProbeConfig, ProbeSet, CSV_HEADER,
};
use schurmult::random::{random_hvector, random_matrix, seeded_rng};
use schurmult::{
    modulate, schur_product, smooth_fejer, BlockMatrix, Complex64, EstimateKind, NormEstimate, Side, StructureTag,
    SymbolPolynomial,
};

use crate::config::{Experiment, NormKind, RunConfig};
use crate::error::CliError;
use crate::input::{self, NamedDocument};
use crate::report::Report;

pub const PROFILE_HEADER: [&str; 5] = ["experiment_id", "parameter", "metric", "value", "verdict"];
pub const VERIFY_HEADER: [&str; 6] = ["check", "matrix_id", "status", "measured", "bound", "slack"];
pub const GEN_HEADER: [&str; 3] = ["matrix_id", "file", "kind"];

/// Factor applied to Schur products under `--inject-fault`.
pub const FAULT_SCALE: f64 = 1.01;

fn context(cfg: &RunConfig) -> Vec<(&'static str, String)> {
    vec![("seed", cfg.seed.to_string())]
}

fn load_inputs(cfg: &RunConfig) -> Result<Vec<NamedDocument>, CliError> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| CliError::precondition("no input given"))?;
    let docs = input::load(path)?;
    if let Some(d) = cfg.d {
        if let Some(bad) = docs.iter().find(|nd| nd.doc.dim() != d) {
            return Err(CliError::precondition(format!(
                "{}: block dimension is {}, but d = {d} was requested",
                bad.id,
                bad.doc.dim()
            )));
        }
    }
    Ok(docs)
}

fn realize(nd: &NamedDocument, cfg: &RunConfig) -> Result<BlockMatrix, CliError> {
    nd.doc
        .realize(cfg.n)
        .map_err(|e| CliError::precondition(format!("{}: {e}", nd.id)))
}

// ---------------------------------------------------------------------------------------
// norm

pub fn cmd_norm(cfg: &RunConfig) -> Result<String, CliError> {
    let docs = load_inputs(cfg)?;
    let all = cfg.norm_kinds.len() == NormKind::ALL.len();
    let mut report = Report::new("norm", &context(cfg), &CSV_HEADER);
    for nd in &docs {
        let symbol = nd.doc.symbol();
        let mut matrix: Option<BlockMatrix> = None;
        for &kind in &cfg.norm_kinds {
            if kind.needs_symbol() && symbol.is_none() {
                if all {
                    continue;
                }
                return Err(CliError::precondition(format!(
                    "{}: {} needs a toeplitz or symbol document",
                    nd.id,
                    kind.as_str()
                )));
            }
            if !kind.needs_symbol() && matrix.is_none() {
                matrix = Some(realize(nd, cfg)?);
            }
            for (side, est) in norm_rows(kind, matrix.as_ref(), symbol.as_ref(), cfg)? {
                report.row(est.csv_record(&nd.id, kind.as_str(), side, cfg.seed));
            }
        }
    }
    report.finish()
}

fn norm_rows(
    kind: NormKind,
    a: Option<&BlockMatrix>,
    f: Option<&SymbolPolynomial>,
    cfg: &RunConfig,
) -> Result<Vec<(&'static str, NormEstimate)>, CliError> {
    let grid = |f: &SymbolPolynomial| cfg.grid_m.unwrap_or_else(|| default_grid(f));
    Ok(match kind {
        NormKind::Operator => vec![("-", operator_norm(a.expect("realized"), cfg.tol)?)],
        NormKind::OperatorIterative => vec![(
            "-",
            operator_norm_iterative(a.expect("realized"), cfg.tol, PowerConfig::default().max_iter, cfg.seed)?,
        )],
        NormKind::MultiplierLower => {
            let a = a.expect("realized");
            let mut rows = Vec::new();
            for &side in &cfg.sides {
                rows.push((
                    side.as_str(),
                    multiplier_lower_bound_seeded(a, side, &ProbeConfig::default(), cfg.seed)?,
                ));
            }
            rows
        }
        NormKind::MultiplierUpper => {
            let hint = f.cloned().map_or(BoundHint::None, BoundHint::Symbol);
            vec![("both", multiplier_upper_bound_with(a.expect("realized"), &hint)?.bound)]
        }
        NormKind::SymbolSup => {
            let f = f.expect("checked");
            let v = symbol_sup_norm(f, grid(f))?;
            // A grid maximum never exceeds the supremum.
            vec![("-", NormEstimate::new(v, EstimateKind::LowerBound, "grid_sup"))]
        }
        NormKind::SymbolL1 => {
            let f = f.expect("checked");
            let v = symbol_l1_norm(f, grid(f))?;
            vec![(
                "-",
                NormEstimate::new(v, EstimateKind::ExactTruncation, "grid_l1").with_residual(REFINE_TOL),
            )]
        }
        NormKind::L1Sot => {
            let f = f.expect("checked");
            vec![("-", l1_sot_norm(f, grid(f), &OptimizerConfig::default(), cfg.seed)?)]
        }
    })
}

// ---------------------------------------------------------------------------------------
// profile

pub struct ProfileOutput {
    pub report: String,
    /// `x,y` pairs of the last profile, for `--plot-data`.
    pub plot: String,
}

pub fn cmd_profile(cfg: &RunConfig) -> Result<ProfileOutput, CliError> {
    let docs = load_inputs(cfg)?;
    let mut ctx = context(cfg);
    ctx.push(("experiment", cfg.experiment.as_str().to_string()));
    let mut report = Report::new("profile", &ctx, &PROFILE_HEADER);
    let mut plot = String::new();
    for nd in &docs {
        let a = realize(nd, cfg)?;
        let p = run_experiment(&a, cfg)?;
        let id = format!("{}/{}", nd.id, cfg.experiment.as_str());
        let integer_grid = p.parameter != "r";
        let param = |x: f64| {
            if integer_grid {
                format!("{}={}", p.parameter, x as i64)
            } else {
                format!("{}={x}", p.parameter)
            }
        };
        for (x, v) in p.grid.iter().zip(&p.values) {
            report.row([id.clone(), param(*x), p.metric.clone(), format_real(*v), String::new()]);
        }
        if let Some(lower) = &p.lower {
            for (x, v) in p.grid.iter().zip(lower) {
                report.row([
                    id.clone(),
                    param(*x),
                    "multiplier_lower".into(),
                    format_real(*v),
                    String::new(),
                ]);
            }
        }
        report.row([
            id.clone(),
            "all".into(),
            p.metric.clone(),
            String::new(),
            p.verdict.as_str().into(),
        ]);
        plot = format!("# {id}\nx,y\n");
        for (x, v) in p.grid.iter().zip(&p.values) {
            plot.push_str(&format!("{x},{}\n", format_real(*v)));
        }
    }
    Ok(ProfileOutput {
        report: report.finish()?,
        plot,
    })
}

fn run_experiment(a: &BlockMatrix, cfg: &RunConfig) -> Result<ConvergenceProfile, CliError> {
    let pcfg = ProfileConfig {
        mode: cfg.mode,
        seed: cfg.seed,
        ..ProfileConfig::default()
    };
    Ok(match cfg.experiment {
        Experiment::Fejer => fejer_convergence_profile(a, &cfg.orders, &pcfg)?,
        Experiment::Poisson => {
            let radii = cfg.radii.clone().unwrap_or_else(|| radii_for_orders(&cfg.orders));
            poisson_convergence_profile(a, &radii, &pcfg)?
        }
        Experiment::RiemannLebesgue => riemann_lebesgue_profile(a, &pcfg.rule),
        Experiment::Membership => {
            let verdict = l1_membership_verdict(a, &cfg.orders, cfg.threshold)?;
            // Same computation as the verdict, kept for its rows.
            let mcfg = ProfileConfig {
                mode: NormMode::MultiplierUpper,
                rule: VerdictRule {
                    decay_ratio: cfg.threshold,
                    ..VerdictRule::default()
                },
                ..pcfg
            };
            let mut p = fejer_convergence_profile(a, &cfg.orders, &mcfg)?;
            debug_assert_eq!(p.verdict, verdict);
            p.experiment = "membership".into();
            p.verdict = verdict;
            p
        }
    })
}

// ---------------------------------------------------------------------------------------
// verify

pub struct VerifyOutput {
    pub report: String,
    pub failures: usize,
}

struct Check {
    name: &'static str,
    measured: f64,
    bound: f64,
}

impl Check {
    fn new(name: &'static str, measured: f64, bound: f64) -> Self {
        Self { name, measured, bound }
    }

    fn passed(&self) -> bool {
        self.measured <= self.bound
    }
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyOutput, CliError> {
    let entries = match &cfg.input {
        Some(_) => load_inputs(cfg)?
            .into_iter()
            .map(|nd| corpus_entry(nd, cfg))
            .collect::<Result<Vec<_>, _>>()?,
        None => builtin_corpus(cfg.seed),
    };
    let mut ctx = context(cfg);
    if cfg.inject_fault {
        ctx.push(("fault", format!("schur_scale_{FAULT_SCALE}")));
    }
    let mut report = Report::new("verify", &ctx, &VERIFY_HEADER);
    let mut failures = 0;
    for e in &entries {
        for c in checks(e, cfg)? {
            let ok = c.passed();
            failures += usize::from(!ok);
            report.row([
                c.name.to_string(),
                e.id.clone(),
                if ok { "pass" } else { "fail" }.to_string(),
                format_real(c.measured),
                format_real(c.bound),
                format_real(c.bound - c.measured),
            ]);
        }
    }
    Ok(VerifyOutput {
        report: report.finish()?,
        failures,
    })
}

fn corpus_entry(nd: NamedDocument, cfg: &RunConfig) -> Result<CorpusEntry, CliError> {
    let matrix = realize(&nd, cfg)?;
    let symbol = nd.doc.symbol();
    Ok(CorpusEntry {
        id: nd.id,
        spec: symbol.as_ref().map(SymbolPolynomial::to_toeplitz),
        hint: symbol.map_or(BoundHint::None, BoundHint::Symbol),
        matrix,
    })
}

fn scaled_schur(a: &BlockMatrix, b: &BlockMatrix, fault: bool) -> Result<BlockMatrix, CliError> {
    let p = schur_product(a, b)?;
    Ok(if fault {
        p.scale(Complex64::new(FAULT_SCALE, 0.0))
    } else {
        p
    })
}

fn checks(e: &CorpusEntry, cfg: &RunConfig) -> Result<Vec<Check>, CliError> {
    let a = &e.matrix;
    let (d, n) = (a.dim(), a.size());
    let scale = |x: f64| x.max(1.0);
    let norm = |m: &BlockMatrix| -> Result<f64, CliError> { Ok(operator_norm(m, cfg.tol)?.value) };
    let mut out = Vec::new();

    out.push(Check::new(
        "adjoint_involution",
        a.adjoint().adjoint().max_abs_diff(a),
        0.0,
    ));

    let na = norm(a)?;
    out.push(Check::new(
        "adjoint_norm",
        (norm(&a.adjoint())? - na).abs(),
        1e-10 * scale(na),
    ));

    let mut drift = 0.0f64;
    for t in [0.3, 1.1, 2.5, -0.7] {
        drift = drift.max((norm(&modulate(a, t))? - na).abs());
    }
    out.push(Check::new("modulation_invariance", drift, 1e-8 * scale(na)));

    let mut sum = BlockMatrix::zeros(d, n);
    for l in -(n as i64 - 1)..=(n as i64 - 1) {
        sum = sum.try_add(&a.extract_diagonal(l)?)?;
    }
    out.push(Check::new("diagonal_partition", sum.max_abs_diff(a), 0.0));

    let l = i64::from(n > 1);
    let dl = a.extract_diagonal(l)?;
    let order = 4;
    let expected = l as f64 / (order + 1) as f64 * dl.sup_entry_norm();
    let residue = norm(&smooth_fejer(&dl, order).try_sub(&dl)?)?;
    out.push(Check::new(
        "fejer_residue",
        (residue - expected).abs(),
        1e-12 * scale(expected),
    ));

    let upper = multiplier_upper_bound_with(a, &e.hint)?.best();
    let probes = ProbeSet::standard(d, n, &ProbeConfig::default(), cfg.seed)?;
    let mut lower = 0.0f64;
    for side in [Side::Left, Side::Right] {
        lower = lower.max(multiplier_lower_bound(a, side, &probes)?.value);
    }
    out.push(Check::new("multiplier_sandwich", lower - upper, 1e-9));
    out.push(Check::new("entry_floor", a.sup_entry_norm() - lower, 1e-9));

    // ||B * A|| <= upper ||B|| and ||A * B|| <= upper ||B|| over fixed and random B.
    let mut rng = seeded_rng(cfg.seed ^ 0x5eed);
    let mut tests = vec![BlockMatrix::identity(d, n), BlockMatrix::ones(d, n)];
    tests.extend((0..3).map(|_| random_matrix(&mut rng, d, n)));
    let mut excess = f64::NEG_INFINITY;
    for b in &tests {
        let nb = norm(b)?;
        let right = norm(&scaled_schur(b, a, cfg.inject_fault)?)?;
        let left = norm(&scaled_schur(a, b, cfg.inject_fault)?)?;
        excess = excess.max(right.max(left) - upper * nb);
    }
    out.push(Check::new("submultiplicativity", excess, 1e-9 * scale(upper)));

    if let (Some(spec), StructureTag::Toeplitz) = (&e.spec, a.structure()) {
        if spec.realize(n).max_abs_diff(a) == 0.0 {
            let x = random_hvector(&mut rng, d, n);
            let fast = toeplitz_apply_fast(spec, &x)?;
            let dense = a.apply(&x)?;
            let diff = fast.max_abs_diff(&dense);
            out.push(Check::new("fft_equivalence", diff, 1e-10 * scale(dense.norm())));
            if n > 1 {
                let corner = spec.realize(n).leading_corner(n - 1)?;
                out.push(Check::new(
                    "corner_consistency",
                    corner.max_abs_diff(&spec.realize(n - 1)),
                    0.0,
                ));
            }
        }
    }

    let back = match parse_document(&write_matrix(a))? {
        SpecDocument::Dense(m) => m,
        other => {
            return Err(CliError::precondition(format!(
                "round trip produced a {} document",
                other.kind()
            )))
        }
    };
    let exact = back == *a;
    out.push(Check::new("round_trip", if exact { 0.0 } else { 1.0 }, 0.0));
    Ok(out)
}

// ---------------------------------------------------------------------------------------
// gen

pub struct GenOutput {
    pub report: String,
    /// File name and contents, relative to the output directory.
    pub files: Vec<(PathBuf, String)>,
}

/// The built-in corpus as spec files, plus a seeded random dense matrix when both `N` and
/// `d` are given.
pub fn cmd_gen(cfg: &RunConfig) -> Result<GenOutput, CliError> {
    let mut docs: Vec<(String, String, &'static str)> = Vec::new();
    for e in builtin_corpus(cfg.seed) {
        match (&e.spec, e.matrix.structure()) {
            (Some(spec), StructureTag::Toeplitz) => {
                docs.push((e.id, write_toeplitz(spec, Some(e.matrix.size())), "toeplitz"))
            }
            _ => docs.push((e.id, write_matrix(&e.matrix), "dense")),
        }
    }
    if let (Some(n), Some(d)) = (cfg.n, cfg.d) {
        let m = random_matrix(&mut seeded_rng(cfg.seed), d, n);
        docs.push((format!("random_d{d}_n{n}"), write_matrix(&m), "dense"));
    }
    let mut report = Report::new("gen", &context(cfg), &GEN_HEADER);
    let mut files = Vec::new();
    for (id, text, kind) in docs {
        let file = PathBuf::from(format!("{id}.spec"));
        report.row([id.as_str(), &file.display().to_string(), kind]);
        files.push((file, text));
    }
    Ok(GenOutput {
        report: report.finish()?,
        files,
    })
}
