use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    /// A linear maximisation over the spectrahedron has no finite optimum.
    #[error("linear objective is unbounded over the spectrahedron")]
    Unbounded,
    #[error("start point is not strictly feasible")]
    InfeasibleStart,
    #[error("point lies inside the spectrahedron")]
    PointInside,
    #[error("centre point is not strictly interior")]
    CenterNotInterior,

    /// Input expected to be compact is unbounded.
    #[error("spectrahedron is unbounded; it is not a valid cutting-scheme input")]
    UnboundedInput,
    #[error("recession cone is not pointed (the set contains a line)")]
    NotPointed,
    #[error("spectrahedron has empty interior")]
    NoInterior,
    #[error("spectrahedron is compact; use the cutting scheme instead")]
    CompactInput,
    #[error("pencil is not homogeneous (A0 != 0)")]
    NotHomogeneous,
    #[error("trace direction vanishes; cannot build an interior polar direction")]
    DegenerateDirection,
    #[error("iteration cap of {0} reached")]
    IterationCap(usize),

    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("empty input")]
    EmptyInput,
    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    #[error("parse error: {0}")]
    Parse(String),
}
