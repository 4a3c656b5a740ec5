use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad factorization: {0}")]
    BadFactorization(String),

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("ket is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("negative eigenvalue {value:e} below cutoff")]
    NegativeEigenvalue { value: f64 },

    #[error("ambiguous zero-temperature limit: ground space is {degeneracy}-fold degenerate")]
    AmbiguousZeroTemperature { degeneracy: usize },

    #[error("invalid inverse temperature {0}")]
    InvalidBeta(f64),

    #[error("non-unitary block: {0}")]
    NonUnitaryBlock(String),

    #[error("ket {index} is not an eigenvector of the total Hamiltonian (residual {residual:e})")]
    NotEnergyEigenvector { index: usize, residual: f64 },

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("perturbation too strong: level {level} has best overlap {overlap:.3}")]
    PerturbationTooStrong { level: usize, overlap: f64 },

    #[error("unsupported measured dimension {0} (projective optimization needs a qubit)")]
    UnsupportedMeasuredDimension(usize),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("θ undefined at this point: {0}")]
    ThetaUndefined(String),

    #[error("inconsistent phase relation: {0}")]
    InconsistentRelation(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidOptimizer(String),

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
