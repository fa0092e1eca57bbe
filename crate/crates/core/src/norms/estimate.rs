use std::fmt;

/// What a reported value certifies about the norm it estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimateKind {
    /// The norm of the truncation, to the stated residual.
    ExactTruncation,
    LowerBound,
    UpperBound,
}

impl EstimateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateKind::ExactTruncation => "exact_truncation",
            EstimateKind::LowerBound => "lower_bound",
            EstimateKind::UpperBound => "upper_bound",
        }
    }
}

impl fmt::Display for EstimateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    pub method: String,
    pub iterations: usize,
    pub residual: f64,
}

impl NormEstimate {
    pub fn new(value: f64, kind: EstimateKind, method: impl Into<String>) -> Self {
        Self {
            value,
            kind,
            method: method.into(),
            iterations: 0,
            residual: 0.0,
        }
    }

    /// The degenerate answer for a zero input: every norm is exactly 0.
    pub fn zero(method: impl Into<String>) -> Self {
        Self::new(0.0, EstimateKind::ExactTruncation, method)
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_residual(mut self, residual: f64) -> Self {
        self.residual = residual;
        self
    }

    /// Fields in CSV order: matrix_id, norm_kind, side, value, method, iterations, residual, seed.
    /// `norm_kind` names the estimated quantity; what the value certifies about it is
    /// appended to the method as `method[kind]`.
    pub fn csv_record(&self, matrix_id: &str, norm_kind: &str, side: &str, seed: u64) -> [String; 8] {
        [
            matrix_id.to_string(),
            norm_kind.to_string(),
            side.to_string(),
            format_real(self.value),
            format!("{}[{}]", self.method, self.kind),
            self.iterations.to_string(),
            format_real(self.residual),
            seed.to_string(),
        ]
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "matrix_id",
    "norm_kind",
    "side",
    "value",
    "method",
    "iterations",
    "residual",
    "seed",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        // Avoid printing `-0` for negative zero.
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}
