//! Command-line flags, the optional TOML config file, and their merge into a validated
//! [`RunConfig`]. Precedence: flags, then the config file, then defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use schurmult::lab::NormMode;
use schurmult::Side;
use serde::Deserialize;

use crate::error::CliError;

/// Environment variable naming the default corpus directory.
pub const CORPUS_DIR_ENV: &str = "SCHURMULT_CORPUS_DIR";
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_ORDERS: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];

#[derive(Debug, Parser)]
#[command(
    name = "schurmult",
    version,
    about = "Norms, multiplier bounds and convergence profiles of block matrices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandName,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandName {
    /// Norm estimates of every document in the input.
    Norm,
    /// A convergence profile and its verdict.
    Profile,
    /// Invariant checks over the built-in corpus or the input.
    Verify,
    /// Write the built-in corpus as spec files.
    Gen,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::Norm => "norm",
            CommandName::Profile => "profile",
            CommandName::Verify => "verify",
            CommandName::Gen => "gen",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Spec file, multi-document corpus file, or directory of `.spec` files.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Report file (stdout when absent); for `gen`, the target directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// TOML file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Truncation size.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Block dimension; checked against the input.
    #[arg(long = "d", global = true)]
    pub d: Option<usize>,
    /// Comma-separated Fejer orders.
    #[arg(long, global = true, value_delimiter = ',')]
    pub orders: Option<Vec<usize>>,
    /// Comma-separated Poisson radii.
    #[arg(long, global = true, value_delimiter = ',')]
    pub radii: Option<Vec<f64>>,
    /// Quadrature grid size for symbol norms.
    #[arg(long = "grid-M", global = true)]
    pub grid_m: Option<usize>,
    /// Relative tolerance of the power iteration.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// norm: operator | operator_iterative | multiplier_lower | multiplier_upper | symbol_sup |
    /// symbol_l1 | l1_sot | all. profile: operator | multiplier_upper | multiplier_bounds.
    #[arg(long = "norm-kind", global = true)]
    pub norm_kind: Option<String>,
    /// left | right | both.
    #[arg(long, global = true)]
    pub side: Option<String>,
    /// fejer | poisson | riemann_lebesgue | membership.
    #[arg(long, global = true)]
    pub experiment: Option<String>,
    /// Decay threshold of the membership verdict.
    #[arg(long, global = true)]
    pub threshold: Option<f64>,
    /// Scale every Schur product in `verify` by 1.01.
    #[arg(long = "inject-fault", global = true)]
    pub inject_fault: bool,
    /// Also write the profile as `x,y` pairs to this file.
    #[arg(long = "plot-data", global = true)]
    pub plot_data: Option<PathBuf>,
}

/// Keys accepted in the config file; names match the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub orders: Option<Vec<usize>>,
    pub radii: Option<Vec<f64>>,
    #[serde(rename = "grid_M")]
    pub grid_m: Option<usize>,
    pub tol: Option<f64>,
    pub norm_kind: Option<String>,
    pub side: Option<String>,
    pub experiment: Option<String>,
    pub threshold: Option<f64>,
    pub inject_fault: Option<bool>,
    pub plot_data: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Relative paths in the file are taken relative to the file's directory.
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut cfg: FileConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_column(text, s.start)).unwrap_or((1, 1));
            CliError::Parse {
                path: Some(path.display().to_string()),
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.input, &mut cfg.output, &mut cfg.plot_data]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
    (line, column)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    Operator,
    OperatorIterative,
    MultiplierLower,
    MultiplierUpper,
    SymbolSup,
    SymbolL1,
    L1Sot,
}

impl NormKind {
    pub const ALL: [NormKind; 7] = [
        NormKind::Operator,
        NormKind::OperatorIterative,
        NormKind::MultiplierLower,
        NormKind::MultiplierUpper,
        NormKind::SymbolSup,
        NormKind::SymbolL1,
        NormKind::L1Sot,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Operator => "operator",
            NormKind::OperatorIterative => "operator_iterative",
            NormKind::MultiplierLower => "multiplier_lower",
            NormKind::MultiplierUpper => "multiplier_upper",
            NormKind::SymbolSup => "symbol_sup",
            NormKind::SymbolL1 => "symbol_l1",
            NormKind::L1Sot => "l1_sot",
        }
    }

    pub fn needs_symbol(self) -> bool {
        matches!(self, NormKind::SymbolSup | NormKind::SymbolL1 | NormKind::L1Sot)
    }

    /// `all` expands to every kind; symbol kinds are then skipped for dense inputs.
    fn parse_list(s: &str) -> Result<Vec<NormKind>, CliError> {
        if s == "all" {
            return Ok(Self::ALL.to_vec());
        }
        s.split(',')
            .map(|part| {
                Self::ALL
                    .into_iter()
                    .find(|k| k.as_str() == part.trim())
                    .ok_or_else(|| CliError::precondition(format!("unknown norm kind `{part}`")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fejer,
    Poisson,
    RiemannLebesgue,
    Membership,
}

impl Experiment {
    pub fn as_str(self) -> &'static str {
        match self {
            Experiment::Fejer => "fejer",
            Experiment::Poisson => "poisson",
            Experiment::RiemannLebesgue => "riemann_lebesgue",
            Experiment::Membership => "membership",
        }
    }

    fn parse(s: &str) -> Result<Self, CliError> {
        [
            Experiment::Fejer,
            Experiment::Poisson,
            Experiment::RiemannLebesgue,
            Experiment::Membership,
        ]
        .into_iter()
        .find(|e| e.as_str() == s)
        .ok_or_else(|| CliError::precondition(format!("unknown experiment `{s}`")))
    }
}

/// Fully resolved and validated settings of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandName,
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub orders: Vec<usize>,
    /// `None` means radii paired with the orders.
    pub radii: Option<Vec<f64>>,
    pub grid_m: Option<usize>,
    pub tol: f64,
    pub norm_kinds: Vec<NormKind>,
    pub mode: NormMode,
    pub sides: Vec<Side>,
    pub experiment: Experiment,
    pub threshold: f64,
    pub inject_fault: bool,
    pub plot_data: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for `command`, before any flag or file.
    pub fn defaults(command: CommandName) -> Self {
        Self {
            command,
            input: None,
            output: None,
            seed: DEFAULT_SEED,
            n: None,
            d: None,
            orders: DEFAULT_ORDERS.to_vec(),
            radii: None,
            grid_m: None,
            tol: DEFAULT_TOL,
            norm_kinds: vec![NormKind::Operator],
            mode: NormMode::Operator,
            sides: vec![Side::Left, Side::Right],
            experiment: Experiment::Fejer,
            threshold: DEFAULT_THRESHOLD,
            inject_fault: false,
            plot_data: None,
        }
    }

    /// Merges flags over the config file over defaults. `corpus_dir` is the value of
    /// [`CORPUS_DIR_ENV`]: the default input of `verify` and the default output of `gen`.
    pub fn resolve(command: CommandName, flags: &Flags, corpus_dir: Option<PathBuf>) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Self::merge(command, flags, &file, corpus_dir)
    }

    pub fn merge(
        command: CommandName,
        flags: &Flags,
        file: &FileConfig,
        corpus_dir: Option<PathBuf>,
    ) -> Result<Self, CliError> {
        let mut cfg = Self::defaults(command);
        macro_rules! pick {
            ($field:ident) => {
                flags.$field.clone().or_else(|| file.$field.clone())
            };
        }
        cfg.input = pick!(input);
        cfg.output = pick!(output);
        if cfg.input.is_none() && command == CommandName::Verify {
            cfg.input = corpus_dir.clone();
        }
        if cfg.output.is_none() && command == CommandName::Gen {
            cfg.output = corpus_dir;
        }
        cfg.seed = pick!(seed).unwrap_or(cfg.seed);
        cfg.n = pick!(n);
        cfg.d = pick!(d);
        if let Some(o) = pick!(orders) {
            cfg.orders = o;
        }
        cfg.radii = pick!(radii);
        cfg.grid_m = pick!(grid_m);
        cfg.tol = pick!(tol).unwrap_or(cfg.tol);
        cfg.threshold = pick!(threshold).unwrap_or(cfg.threshold);
        cfg.inject_fault = flags.inject_fault || file.inject_fault.unwrap_or(false);
        cfg.plot_data = pick!(plot_data);
        if let Some(e) = pick!(experiment) {
            cfg.experiment = Experiment::parse(&e)?;
        }
        if let Some(s) = pick!(side) {
            cfg.sides = match s.as_str() {
                "both" => vec![Side::Left, Side::Right],
                other => vec![other
                    .parse::<Side>()
                    .map_err(|_| CliError::precondition(format!("side must be left, right or both, got `{other}`")))?],
            };
        }
        if let Some(k) = pick!(norm_kind) {
            match command {
                CommandName::Profile => {
                    cfg.mode = match k.as_str() {
                        "operator" => NormMode::Operator,
                        "multiplier_upper" => NormMode::MultiplierUpper,
                        "multiplier_bounds" => NormMode::MultiplierBounds,
                        other => return Err(CliError::precondition(format!(
                            "profile norm kind must be operator, multiplier_upper or multiplier_bounds, got `{other}`"
                        ))),
                    }
                }
                _ => cfg.norm_kinds = NormKind::parse_list(&k)?,
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = |name: &str, v: Option<usize>| match v {
            Some(0) => Err(CliError::precondition(format!("{name} must be at least 1"))),
            _ => Ok(()),
        };
        positive("N", self.n)?;
        positive("d", self.d)?;
        positive("grid-M", self.grid_m)?;
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(CliError::precondition(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(CliError::precondition(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        if self.orders.is_empty() || self.orders.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::precondition(
                "orders must be nonempty and strictly increasing",
            ));
        }
        if let Some(r) = &self.radii {
            if r.is_empty() || r.windows(2).any(|w| w[0] >= w[1]) || r.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                return Err(CliError::precondition(
                    "radii must be nonempty, strictly increasing and inside (0, 1)",
                ));
            }
        }
        if matches!(self.command, CommandName::Norm | CommandName::Profile) && self.input.is_none() {
            return Err(CliError::precondition(format!(
                "{} needs --input",
                self.command.as_str()
            )));
        }
        if self.command == CommandName::Gen && self.output.is_none() {
            return Err(CliError::precondition(format!(
                "gen needs --output or {CORPUS_DIR_ENV}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags {
            input: Some("a.spec".into()),
            ..Flags::default()
        }
    }

    #[test]
    fn defaults_are_documented_constants() {
        let cfg = RunConfig::merge(CommandName::Norm, &flags(), &FileConfig::default(), None).unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert_eq!(cfg.norm_kinds, vec![NormKind::Operator]);
        assert_eq!(cfg.sides, vec![Side::Left, Side::Right]);
    }

    #[test]
    fn flags_beat_file_beats_defaults() {
        let file = FileConfig::parse("seed = 5\ntol = 1e-6\nN = 12\n", Path::new("cfg.toml")).unwrap();
        let mut f = flags();
        f.seed = Some(9);
        let cfg = RunConfig::merge(CommandName::Norm, &f, &file, None).unwrap();
        assert_eq!((cfg.seed, cfg.tol, cfg.n), (9, 1e-6, Some(12)));
    }

    #[test]
    fn config_paths_are_relative_to_the_file() {
        let file = FileConfig::parse("input = \"m.spec\"\n", Path::new("dir/cfg.toml")).unwrap();
        assert_eq!(file.input, Some(PathBuf::from("dir/m.spec")));
    }

    #[test]
    fn unknown_config_keys_are_parse_errors() {
        let err = FileConfig::parse("seed = 1\nbogus = 2\n", Path::new("c.toml")).unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn overrides_are_validated_before_dispatch() {
        let bad = [
            Flags { n: Some(0), ..flags() },
            Flags {
                tol: Some(-1.0),
                ..flags()
            },
            Flags {
                orders: Some(vec![4, 2]),
                ..flags()
            },
            Flags {
                radii: Some(vec![0.5, 1.0]),
                ..flags()
            },
            Flags {
                norm_kind: Some("frobenius".into()),
                ..flags()
            },
            Flags {
                side: Some("up".into()),
                ..flags()
            },
            Flags {
                threshold: Some(1.5),
                ..flags()
            },
        ];
        for f in bad {
            let err = RunConfig::merge(CommandName::Norm, &f, &FileConfig::default(), None).unwrap_err();
            assert_eq!(err.exit_code(), crate::error::EXIT_PRECONDITION, "{f:?}");
        }
    }

    #[test]
    fn corpus_dir_is_the_fallback_for_verify_and_gen() {
        let dir = Some(PathBuf::from("/corpus"));
        let v = RunConfig::merge(
            CommandName::Verify,
            &Flags::default(),
            &FileConfig::default(),
            dir.clone(),
        )
        .unwrap();
        assert_eq!(v.input, dir);
        let g = RunConfig::merge(CommandName::Gen, &Flags::default(), &FileConfig::default(), dir.clone()).unwrap();
        assert_eq!(g.output, dir);
        assert!(RunConfig::merge(CommandName::Gen, &Flags::default(), &FileConfig::default(), None).is_err());
    }

    #[test]
    fn profile_norm_kinds_select_the_mode() {
        let f = Flags {
            norm_kind: Some("multiplier_bounds".into()),
            ..flags()
        };
        let cfg = RunConfig::merge(CommandName::Profile, &f, &FileConfig::default(), None).unwrap();
        assert_eq!(cfg.mode, NormMode::MultiplierBounds);
    }
}
