use thiserror::Error;

/// Errors raised by the operator algebra, simulator, and solver layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: expected {expected}, found {found}")]
    QubitCountMismatch { expected: usize, found: usize },

    #[error("fermionic mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("pauli exponential requires a real coefficient, got imaginary part {imag:e}")]
    NonRealCoefficient { imag: f64 },

    #[error("operator is not Hermitian (imaginary residue {residue:e})")]
    NonHermitian { residue: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{qubits} qubits exceeds the dense limit of {max}")]
    TooManyQubits { qubits: usize, max: usize },

    #[error("invalid occupation string {0:?}")]
    InvalidOccupation(String),

    #[error("reference occupation {0:?} has no occupied or no virtual modes")]
    NoExcitations(String),

    #[error("parameter vector has length {found}, ansatz expects {expected}")]
    ParameterCount { expected: usize, found: usize },

    #[error("variable index {index} out of range for {count} variables")]
    VariableOutOfRange { index: usize, count: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("initial states {first} and {second} are not orthogonal")]
    NonOrthogonalStates { first: usize, second: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
