use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of {0} is not representable in Q(zeta_8)")]
    NoSquareRoot(String),
    #[error("series: {0}")]
    Series(String),
    #[error("series coefficient at exponent {exp} requested but series is only known below order {order}")]
    OrderExceeded { exp: i64, order: i64 },
    #[error("curve: {0}")]
    Curve(String),
    #[error("projection residual is nonzero: {0}")]
    ProjectionResidual(String),
    #[error("coefficient ring element is not invertible: {0}")]
    NotInvertible(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
