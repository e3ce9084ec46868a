use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("qubit count {found} outside supported range 1..={max}")]
    QubitCount { found: usize, max: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("non-invertible normalization for operator {index}: every candidate eigenvalue is zero")]
    NonInvertibleNormalization { index: usize },

    #[error("stabilizer set is not abelian (max commutator norm {0:.3e})")]
    NonAbelian(f64),

    #[error("operator {what} is not ζ-representable (not a single tensor product); use the vec formalism")]
    NotZetaRepresentable { what: String },

    #[error("trace drifted to {trace:.6e} at t = {t}; reduce the step size (dt = {dt})")]
    TraceDrift { t: f64, dt: f64, trace: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
