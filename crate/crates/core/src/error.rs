use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate basis: concatenated image/kernel bases have condition number {condition:e}")]
    DegenerateBasis { condition: f64 },

    #[error("consistency precondition failed: {identity} has residual {residual:e}")]
    ConsistencyPrecondition { identity: String, residual: f64 },

    #[error("out of regime for N = {n}, beta = {beta}, gamma = {gamma}: {reason}")]
    OutOfRegime { n: usize, beta: f64, gamma: f64, reason: String },

    #[error("no convergence after {iterations} iterations (last residual {:e})", residuals.last().copied().unwrap_or(f64::NAN))]
    NonConvergence { iterations: usize, residuals: Vec<f64> },

    #[error("{requested} projections requested, permutation cap is {cap}")]
    PermutationCap { requested: usize, cap: usize },

    #[error("tree series not applicable: {reason} (rho = {rho})")]
    Inapplicable { rho: f64, reason: String },

    #[error("subgroup error: {0}")]
    Subgroup(String),

    #[error("parse error at line {line}: expected {expected}")]
    Parse { line: usize, expected: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Self::Domain(msg.into())
    }

    pub fn parse(line: usize, expected: impl Into<String>) -> Self {
        Self::Parse { line, expected: expected.into() }
    }

    /// Short machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Domain(_) => "domain",
            Self::DegenerateBasis { .. } => "degenerate-basis",
            Self::ConsistencyPrecondition { .. } => "consistency-precondition",
            Self::OutOfRegime { .. } => "out-of-regime",
            Self::NonConvergence { .. } => "non-convergence",
            Self::PermutationCap { .. } => "permutation-cap",
            Self::Inapplicable { .. } => "inapplicable",
            Self::Subgroup(_) => "subgroup",
            Self::Parse { .. } => "parse",
        }
    }
}
