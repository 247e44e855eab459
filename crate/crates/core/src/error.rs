use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid units: {0}")]
    InvalidUnits(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero-mode amplitude {amplitude:e} exceeds {limit:e}; negative powers of the frequency operator need a zero-mean field")]
    ZeroMode { amplitude: f64, limit: f64 },

    #[error("operation needs a {expected}D field, got {found}D")]
    Dimension { expected: usize, found: usize },

    #[error("field is not transverse (residual {residual:e})")]
    Transversality { residual: f64 },

    #[error("wavevector is zero")]
    ZeroWaveVector,

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("states carry different unit systems")]
    UnitsMismatch,

    #[error("{found} components given, a {dim}D field needs {expected}")]
    ComponentCount {
        dim: usize,
        expected: usize,
        found: usize,
    },

    #[error("field samples are not real (imaginary residual {residual:e})")]
    NotReal { residual: f64 },

    #[error("state or field is identically zero")]
    ZeroState,

    #[error("detector volume is outside the grid domain: {0}")]
    VolumeOutOfDomain(String),

    #[error("tail window unusable: {0}")]
    InsufficientWindow(String),

    #[error("field is not a helicity eigenfield (residual {residual:e})")]
    NotEigenfield { residual: f64 },

    #[error("field leaks outside the localization region (relative amplitude {leak:e})")]
    Support { leak: f64 },

    #[error("pulse length {pulse} does not fit in a domain of length {domain}")]
    ProfileTooWide { pulse: f64, domain: f64 },

    #[error("malformed state file: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
