use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("value {value} escapes grid range [{min}, {max}] ({what})")]
    RangeEscape {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("CFL condition violated: dt*sup|q| = {lhs} > dx = {rhs}")]
    Cfl { lhs: f64, rhs: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
