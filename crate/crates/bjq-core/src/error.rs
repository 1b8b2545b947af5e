use thiserror::Error;

/// Errors produced by the bjq numerical kernels and file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("window is identically zero")]
    ZeroWindow,

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("grid resolution insufficient: {0}")]
    GridResolution(String),

    #[error("operator is not numerically Hermitian (defect {defect:.3e} > {limit:.3e})")]
    NotHermitian { defect: f64, limit: f64 },

    #[error("Gabor frame is ill-conditioned (condition number {cond:.3e})")]
    FrameIllConditioned { cond: f64 },

    #[error("format error at byte offset {offset}: {message}")]
    Format { offset: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
