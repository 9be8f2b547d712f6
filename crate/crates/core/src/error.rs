use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid {n1}x{n2}: {reason}")]
    InvalidGrid {
        n1: usize,
        n2: usize,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected_n1}x{expected_n2} samples, got {got_n1}x{got_n2}")]
    DimensionMismatch {
        expected_n1: usize,
        expected_n2: usize,
        got_n1: usize,
        got_n2: usize,
    },

    #[error("fields live on different grids ({0})")]
    GridMismatch(String),

    #[error("field is not Hermitian: imaginary residue {residue:e} exceeds {tolerance:e}")]
    NotHermitian { residue: f64, tolerance: f64 },

    #[error("field is not flagged as real-valued")]
    NotReal,

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("invalid norm specification: {0}")]
    InvalidNorm(String),

    #[error("kmax {kmax} exceeds min(n1, n2)/3 = {limit}")]
    KmaxTooLarge { kmax: usize, limit: usize },

    #[error("parameter `{name}` = {value} out of range: {range}")]
    OutOfRange {
        name: String,
        value: f64,
        range: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("blow-up detected at t = {t}: {what}")]
    BlowUp { t: f64, what: String },

    #[error("config error at line {line}, key `{key}`: {message}")]
    Config {
        line: usize,
        key: String,
        message: String,
    },

    #[error("checkpoint magic mismatch: expected \"ASQG\", found {found:?}")]
    CheckpointMagic { found: [u8; 4] },

    #[error("checkpoint version {found} is not supported (expected {expected})")]
    CheckpointVersion { found: u32, expected: u32 },

    #[error("checkpoint truncated: expected {expected} bytes, found {found}")]
    CheckpointTruncated { expected: usize, found: usize },

    #[error("checkpoint has {extra} trailing bytes")]
    CheckpointTrailing { extra: usize },

    #[error("malformed diagnostics record: {0}")]
    Record(String),

    #[error("inconsistent trajectory: {0}")]
    Trajectory(String),

    #[error("no admissible sigma below {limit:e}: {reason}")]
    CertificateFailure { limit: f64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn out_of_range(name: &str, value: f64, range: &str) -> Self {
        Error::OutOfRange {
            name: name.to_string(),
            value,
            range: range.to_string(),
        }
    }
}
