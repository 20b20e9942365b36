use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree must be at least 1")]
    ConstantPolynomial,
    #[error("root finder did not converge after {iterations} iterations (max residual {max_residual:e})")]
    RootsNotConverged {
        iterations: usize,
        roots: Vec<num_complex::Complex64>,
        max_residual: f64,
    },
    #[error("index {index} out of range 0..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid band symbol: {0}")]
    InvalidSymbol(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("symbolic budget exceeded: m + n = {size} > {limit}")]
    SymbolicBudget { size: usize, limit: usize },
    #[error("α-roots not separated (min relative gap {gap:e}); use the LU determinant")]
    RootsNotSeparated { gap: f64 },
    #[error("unsupported locus dimension n = {n} for {operation}")]
    UnsupportedDimension { n: usize, operation: &'static str },
    #[error("m = {m} exceeds the solver budget {limit}")]
    SolverBudget { m: usize, limit: usize },
    #[error("eigensolver did not converge on a {size}×{size} matrix")]
    EigenNotConverged { size: usize },
    #[error("resultant interpolation ill-conditioned at every tried radius")]
    InterpolationIllConditioned,
    #[error("scan grid too coarse: no sample inside C_A")]
    EmptyRegion,
    #[error("empty locus")]
    EmptyLocus,
    #[error("locus must be rank-filtered (full kind)")]
    NotFullKind,
    #[error("{0}")]
    Invalid(String),
}
