use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("similitude is not contracting (ratio {0})")]
    NotContracting(String),
    #[error("letter {letter} is outside the alphabet 1..={alphabet}")]
    LetterOutOfRange { letter: u32, alphabet: usize },
    #[error("resource limit: {requested} items requested, cap is {cap}")]
    ResourceLimit { requested: u128, cap: usize },
    #[error("the IFS is not homogeneous: contraction ratios differ")]
    NotHomogeneous,
    #[error("point is not in the attractor (every candidate cell was excluded)")]
    NotInAttractor,
    #[error("strong separation not certified within the depth budget")]
    SeparationNotCertified,
    #[error("certified bounds too loose at depth {0}; increase the depth")]
    BoundsTooLoose(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
