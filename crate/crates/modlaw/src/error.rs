use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("probability must lie strictly between 0 and 1, got {0}")]
    InvalidProbability(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("residue {i} is out of range for modulus {q}")]
    ResidueOutOfRange { q: u32, i: u32 },
    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u32),
    #[error("formula mixes moduli {0} and {1}")]
    MixedModuli(u32, u32),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("missing coordinate {0}")]
    MissingCoordinate(String),
}
