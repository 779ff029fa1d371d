use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("breakpoints must be strictly increasing from 0 to 1: {0}")]
    Breakpoints(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("periodicity violated: {0}")]
    Periodicity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not a vertex of the complex")]
    NotAVertex(String),
    #[error("vertex {0} does not belong to the face")]
    VertexNotInFace(String),
    #[error("f must lie strictly between 0 and 1, got {0}")]
    FOutOfRange(String),
    #[error("no breakpoint in (0, 1) takes the value 1")]
    NoF,
    #[error("function is not subadditive")]
    NotSubadditive,
    #[error("function is not minimal")]
    NotMinimal,
    #[error("grid not representable: {0}")]
    Grid(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("cannot read {0}")]
    Io(String),
    #[error("unknown compendium entry {0:?}")]
    UnknownEntry(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
