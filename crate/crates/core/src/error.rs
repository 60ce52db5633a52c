use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown root system type `{0}`")]
    UnknownType(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix is not of finite type: {0}")]
    NotFiniteType(String),
    #[error("simple index {} out of range for rank {rank}", .index + 1)]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("Weyl group enumeration exceeded the cap of {0} elements")]
    SafetyBoundExceeded(usize),
    #[error("element is not divisible: {0}")]
    NotDivisible(String),
    #[error("reduced words {} and {} give different results", one_based(.first), one_based(.second))]
    WordMismatch { first: Vec<usize>, second: Vec<usize> },
    #[error("element is not Weyl-invariant (fails at simple reflection {})", .0 + 1)]
    NotInvariant(usize),
    #[error("decomposition did not terminate within {0} steps")]
    NonTermination(usize),
    #[error("Steinberg freeness check failed: {0}")]
    FreenessCheckFailed(String),
    #[error("no decomposition found after {0} box enlargements")]
    BoxExhausted(usize),
    #[error("Hecke basis solve failed: {0}")]
    SolveFailed(String),
    #[error("lattice matrix is singular")]
    SingularMatrix,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn one_based(word: &[usize]) -> String {
    let parts: Vec<String> = word.iter().map(|j| (j + 1).to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl Error {
    /// Short stable name used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::UnknownType(_) => "UnknownType",
            Error::InvalidCartan(_) => "InvalidCartan",
            Error::NotFiniteType(_) => "NotFiniteType",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::SafetyBoundExceeded(_) => "SafetyBoundExceeded",
            Error::NotDivisible(_) => "NotDivisible",
            Error::WordMismatch { .. } => "WordMismatch",
            Error::NotInvariant(_) => "NotInvariant",
            Error::NonTermination(_) => "NonTermination",
            Error::FreenessCheckFailed(_) => "FreenessCheckFailed",
            Error::BoxExhausted(_) => "BoxExhausted",
            Error::SolveFailed(_) => "SolveFailed",
            Error::SingularMatrix => "SingularMatrix",
            Error::Parse { .. } => "ParseError",
        }
    }

    /// Errors that can only arise from a bug in this library rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::WordMismatch { .. }
                | Error::NonTermination(_)
                | Error::FreenessCheckFailed(_)
                | Error::BoxExhausted(_)
                | Error::SolveFailed(_)
        )
    }
}
