use thiserror::Error;

/// Errors raised by the operator, state, relation and simulation layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "spin quantum number must be at least 1/2 (twice_s = 0 is the trivial representation)"
    )]
    TrivialSpin,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("Bloch vector norm {norm} lies outside the unit ball")]
    OutsideBlochBall { norm: f64 },

    #[error("Bloch-vector view requires a qubit, got dimension {dim}")]
    NotQubit { dim: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("trace has imaginary residue {residue:e}")]
    ComplexExpectation { residue: f64 },

    #[error("{relation} holds only for spin 1/2 (requested twice_s = {twice_s})")]
    SpinRestricted {
        relation: &'static str,
        twice_s: u32,
    },

    #[error("{0} needs an explicit operator pair; use evaluate_robertson")]
    NeedsOperators(&'static str),

    #[error("no analytic equality condition is implemented for {0}")]
    NoEqualityCondition(&'static str),

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("relation `{given}` is ambiguous: {candidates}")]
    AmbiguousRelation { given: String, candidates: String },

    #[error("expectation {estimate} exceeds the spin-1/2 range [-1/2, 1/2]")]
    EstimateOutOfRange { estimate: f64 },

    #[error("missing estimate for axis {0}")]
    MissingAxis(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
