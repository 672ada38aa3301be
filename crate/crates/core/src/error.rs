use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("impossible postselection: outcome probability {0:e}")]
    ImpossiblePostselection(f64),
    #[error("degenerate sample: {0}")]
    Degenerate(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("fit failed: {0}")]
    Fit(String),
    #[error("validation failed: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
