use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {0} exceeds the supported maximum of 64")]
    DimensionTooLarge(usize),
    #[error("index {index} outside 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("degree overflow: total degree {degree} exceeds dimension {dim}")]
    DegreeOverflow { degree: usize, dim: usize },
    #[error("form degree {degree} does not divide dimension {dim}")]
    DegreeDoesNotDivide { degree: usize, dim: usize },
    #[error("expected a form of degree {expected}, got degree {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("matrix of order {0} has odd order")]
    OddOrder(usize),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not antisymmetric (defect {0:e})")]
    NotAntisymmetric(f64),
    #[error("unknown {what}: {name}")]
    UnknownKind { what: &'static str, name: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("atom at {0} lies outside the support")]
    AtomOutsideSupport(f64),
    #[error("beta must be L^2 or L^2+1 (got {0})")]
    InvalidBeta(u32),
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),
    #[error("size guardrail: {keys} form keys exceed the limit of {limit}")]
    SizeGuard { keys: u128, limit: u128 },
    #[error("coincident points at {0}")]
    CoincidentPoints(f64),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("imaginary residue {imag:e} on a real result {real:e}")]
    ImaginaryResidue { real: f64, imag: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
