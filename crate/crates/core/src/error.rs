use thiserror::Error;

/// Errors produced by the certification engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge: endpoints {0} and {1} must satisfy 1 <= a < b")]
    InvalidEdge(u32, u32),
    #[error("edge endpoint {endpoint} exceeds vertex count {n}")]
    EndpointExceedsN { endpoint: u32, n: u32 },
    #[error("empty edge list")]
    EmptyEdgeList,
    #[error("zero exponent vector")]
    ZeroExponentVector,
    #[error("vertex {0} outside permutation domain [{1}]")]
    OutsideDomain(u32, u32),
    #[error("isolated vertex {0} (not covered by any edge)")]
    IsolatedVertex(u32),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric at entry ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("need n >= k+4 (got n={n}, k={k})")]
    NTooSmall { n: u32, k: u32 },
    #[error("degree must be at least {min} (got {got})")]
    DegreeTooSmall { got: u32, min: u32 },
    #[error("invalid simplex point: {0}")]
    InvalidSimplexPoint(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("jacobi iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
