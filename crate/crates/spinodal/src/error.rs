//! Crate-wide error type.

/// Errors produced by any spinodal operation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter or argument violates a documented invariant.
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// Nodal/spectral buffer size does not match the domain grid.
    #[error("grid/coefficient size mismatch: {0}")]
    SizeMismatch(String),

    /// Eigenvalue multiplicity outside the supported range 1..=3.
    #[error("multiplicity m={0} outside the supported range 1..=3")]
    UnsupportedMultiplicity(usize),

    /// Reduced coefficients were requested within 1e-8 of a slaving pole.
    #[error("resonance: lambda={lambda} within 1e-8 of the pole {pole}")]
    Resonance { lambda: f64, pole: f64 },

    /// A time integration produced NaN/inf or ran into an inconsistent state.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A trajectory left the divergence guard radius.
    #[error("blow-up: state norm exceeded {0:e}")]
    BlowUp(f64),

    /// Amplitude prediction requested outside the continuous (Type-I) regime.
    #[error("amplitude prediction unsupported in the {0} regime")]
    UnsupportedPrediction(String),

    /// Config file rejected; `line` is 1-based.
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    /// Not enough rows/samples to carry out a fit or a jump estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// No fold (saddle-node) exists in the requested parameter range.
    #[error("no fold in sweep range")]
    NoFold,

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code: 1 for configuration problems, 2 for numerical ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidParams(_) | Error::Io(_) => 1,
            _ => 2,
        }
    }
}
