use std::fmt;

use crate::qforms::QuadForm;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameters rejected by an admissibility check.
    #[error("validation error: {0}")]
    Validation(String),
    /// A numerical quantity failed a tolerance or conditioning requirement.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Malformed or insufficient external data.
    #[error("data error: {0}")]
    Data(String),
    /// Evaluation point lies on (or too close to) a geodesic of the given form.
    #[error("point too close to the geodesic of {0}")]
    NearGeodesic(QuadForm),
    /// Fixed-width arithmetic overflowed.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }

    pub fn validation(msg: impl fmt::Display) -> Self {
        Error::Validation(msg.to_string())
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        Error::Data(msg.to_string())
    }
}
