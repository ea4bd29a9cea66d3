use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("mode {mode} shifts to {shifted}, outside cutoff {cutoff}; need K >= {needed}")]
    ShiftOutOfRange {
        mode: i64,
        shifted: i64,
        cutoff: i64,
        needed: i64,
    },

    #[error("field is not real: mirror residue {residue:.3e} exceeds tolerance {tol:.3e}")]
    NotReal { residue: f64, tol: f64 },

    #[error("size mismatch: {0}")]
    SizeMismatch(String),

    #[error("negative noise coefficient q[{k}] = {value:.6e} under restriction construction")]
    NegativeCoefficient { k: i64, value: f64 },

    #[error("symbol assumption failed: {0}")]
    AssumptionFailed(String),

    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },

    #[error("integration blow-up at t = {t} (C0 norm {norm:.3e})")]
    BlowUp { t: f64, norm: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("slope fit: {0}")]
    SlopeFit(String),

    #[error("amplitude derivation: {0}")]
    Derivation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("trajectory file: {0}")]
    TrajectoryFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
