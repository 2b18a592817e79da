use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("phase-space layout mismatch: {0}")]
    LayoutMismatch(String),

    #[error("invalid phase-space layout: {0}")]
    InvalidLayout(String),

    #[error("matrix is not symmetric (max asymmetry {residual:e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not antisymmetric (max residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("polynomial degree {degree} exceeds supported maximum {max}")]
    DegreeTooHigh { degree: u32, max: u32 },

    #[error("constraint is identically zero")]
    ZeroConstraint,

    #[error("inconsistent dynamics: constraint chain forces 1 ≈ 0")]
    InconsistentDynamics,

    #[error("first-class constraints present at indices {0:?}; supply gauge conditions as extra constraints")]
    FirstClassPresent(Vec<usize>),

    #[error("constraint matrix is singular (condition number {condition:e})")]
    SingularConstraintMatrix { condition: f64 },

    #[error("initial point is off the constraint surface (max residual {residual:e})")]
    OffConstraintSurface { residual: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of bounds (len {len})")]
    IndexOutOfBounds { index: usize, len: usize },

    #[error("operator is not hermitian (max residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (max residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidDensity(String),

    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidInverseTemperature(f64),

    #[error("thermal tail weight {tail:e} beyond {dim} levels exceeds {limit:e}")]
    ThermalTail { tail: f64, dim: usize, limit: f64 },

    #[error("dissipation matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator basis is not orthonormal (max Gram residual {residual:e})")]
    NonOrthonormalBasis { residual: f64 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invariant monitor breach at t = {t}: {what}")]
    MonitorBreach { t: f64, what: String },

    #[error("truncation breach: top level of mode {mode} has population {population:e} at t = {t}; try dimension {suggested_dim}")]
    TruncationBreach {
        mode: usize,
        population: f64,
        t: f64,
        suggested_dim: usize,
    },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("no real solution for the constraint coefficient")]
    NoRealCandidate,

    #[error("internal error: {0}")]
    Internal(String),
}
