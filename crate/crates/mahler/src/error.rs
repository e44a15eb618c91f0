use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma pole: argument {0} is a non-positive integer")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypergeometric series diverges: {0}")]
    Divergence(String),
    #[error("value is infinite: {0}")]
    InfiniteValue(String),
    #[error("weight is not integrable: {0}")]
    Integrability(String),
    #[error("ill-conditioned computation: {0}")]
    Conditioning(String),
    #[error("matrix is not antisymmetric (residual {0:e})")]
    NotAntisymmetric(f64),
    #[error("Pfaffian of odd dimension {0}")]
    OddDimension(usize),
    #[error("imaginary residual {0:e} exceeds tolerance")]
    Residual(f64),
    #[error("quadrature did not converge: estimated error {err:e} for value {value:e}")]
    Quadrature { value: f64, err: f64 },
    #[error("conjugate pairing failed: {0}")]
    Pairing(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
