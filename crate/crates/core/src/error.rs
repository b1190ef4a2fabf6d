use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, not square")]
    NonSquare { rows: usize, cols: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph cannot be stabilized: {0}")]
    Unstable(String),
    #[error("graph too large for brute force ({0} vertices)")]
    TooLarge(usize),
    #[error("harmonicity fails at source vertex {vertex}: directions {a} and {b} disagree")]
    HarmonicityViolation { vertex: usize, a: String, b: String },
    #[error("local Riemann-Hurwitz fails at source vertex {0}")]
    RHViolation(usize),
    #[error("branching profile mismatch over target leg {0}")]
    ProfileMismatch(usize),
    #[error("degree {0} exceeds the enumeration cap")]
    DegreeTooLarge(usize),
    #[error("partitions have different sizes")]
    SizeMismatch,
    #[error("profiles do not satisfy the genus-0 Riemann-Hurwitz count")]
    GenusMismatch,
    #[error("invalid genus word: {0}")]
    InvalidWord(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("stabilization mismatch: {0}")]
    StabilizationMismatch(String),
    #[error("infeasible lengths: {0}")]
    InfeasibleLengths(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("condition (*) fails over target edge {0}")]
    StarViolation(usize),
    #[error("source vertex {0} has an unrecognized local profile")]
    UnrecognizedVertex(usize),
    #[error("multiplicity {0} is not 1")]
    NonUnitMultiplicity(String),
    #[error("lemma check fails at i = {0}")]
    MismatchAt(usize),
    #[error("cover is disconnected")]
    DisconnectedCover,
    #[error("linear system is singular or underdetermined")]
    Singular,
    #[error("invalid cover data: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
