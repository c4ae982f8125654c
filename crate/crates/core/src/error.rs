use thiserror::Error;

/// Errors raised by the algebra, geometry and foliation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a Lie algebra: Jacobi residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    NotALieAlgebra { residual: f64, tol: f64 },

    #[error("invalid basis: condition number {condition:.3e} exceeds 1e8")]
    InvalidBasis { condition: f64 },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate plane: Gram determinant {0:.3e}")]
    DegeneratePlane(f64),

    #[error("direction is not a unit vector (norm {0})")]
    NonUnitDirection(f64),

    #[error("foliation conditions violated: {0}")]
    FoliationConditionsViolated(String),

    #[error("Jacobi constraints violated: max(|az|, |ax+by|, |bx-ay|) = {0:.3e}")]
    ConstraintViolation(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
