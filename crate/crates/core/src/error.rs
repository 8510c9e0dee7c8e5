use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register too large: {qubits} qubits exceeds the configured maximum of {max}")]
    RegisterTooLarge { qubits: usize, max: usize },

    #[error("not Hermitian: max |h - h^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("gate/target mismatch: {0}")]
    GateTargetMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid mixing parameter: alpha = {0} is outside [0, 1]")]
    InvalidMixingParameter(f64),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("spectrum too short: need index {needed}, have {len} values")]
    SpectrumTooShort { needed: usize, len: usize },

    #[error("party dimension too large for ordering enumeration: p = {0}")]
    PartyDimensionTooLarge(usize),

    #[error("epsilon below numeric resolution: negativity {negativity:e} <= tolerance {tolerance:e}")]
    EpsilonBelowResolution { negativity: f64, tolerance: f64 },

    #[error("no signal: clean-qubit polarization is zero")]
    NoSignal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("not unitary: max |U^dagger U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("circuit parse error at line {line}: {message}")]
    CircuitParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Failures of numeric validation, as opposed to malformed input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Self::NotHermitian { .. }
                | Self::NotUnitary { .. }
                | Self::InvalidState(_)
                | Self::InvalidSpectrum(_)
                | Self::NoSignal
                | Self::EpsilonBelowResolution { .. }
        )
    }
}
