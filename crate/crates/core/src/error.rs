use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid substitution rule (p={p}, q={q}): both must be >= 1")]
    InvalidRule { p: u32, q: u32 },

    #[error("word length {len} exceeds the configured maximum {max}")]
    WordTooLong { len: u128, max: usize },

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("unknown basis label {0}")]
    UnknownLabel(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("dimension {dim} exceeds the dense-solve cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("state is not normalized (norm^2 = {norm_sq})")]
    Unnormalized { norm_sq: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("need at least {needed} usable box scales, got {got}")]
    TooFewScales { needed: usize, got: usize },

    #[error("no vacancy-like dressed state at n0={n0}, d={d}: {reason}")]
    VdsConditionUnsatisfied { n0: usize, d: usize, reason: String },

    #[error("host is gapless at E=0: {0}")]
    Gapless(String),

    #[error("effective Hamiltonian not symmetric: |K[{i}][{j}] - K[{j}][{i}]| = {diff:e}")]
    SymmetryViolation { i: usize, j: usize, diff: f64 },

    #[error("unrecognized block at emitters {start}..{end}: {reason}")]
    UnrecognizedBlock { start: usize, end: usize, reason: String },

    #[error("trace mismatch: {0}")]
    GridMismatch(String),
}

impl Error {
    /// Errors caused by a malformed request rather than by the computation itself.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidRule { .. }
                | Error::InvalidSpec(_)
                | Error::IndexOutOfRange { .. }
                | Error::UnknownLabel(_)
                | Error::WordTooLong { .. }
                | Error::DimensionTooLarge { .. }
        )
    }
}
