use thiserror::Error;

/// Errors raised across the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("conflicting Dirichlet constraints on dof {dof}")]
    ConflictingConstraint { dof: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular pivot at row {row}")]
    SingularPivot { row: usize },

    #[error("factorization failed: {0}")]
    Factorization(String),

    /// A quadrature point left the admissible set (J <= 0 or v <= 0).
    /// The caller is expected to cut the time step.
    #[error("inadmissible state at element {element}, point {point}: {reason}")]
    Inadmissible {
        element: usize,
        point: usize,
        reason: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time {t} outside load program range [0, {end}]")]
    TimeOutOfRange { t: f64, end: f64 },

    #[error("Newton iteration did not converge in {iterations} iterations")]
    NewtonDiverged { iterations: usize },

    #[error("time stepping aborted at t = {last_good_time} after {cuts} step cuts")]
    StepAborted { last_good_time: f64, cuts: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures that a time-step cut may cure.
    pub fn is_step_cut(&self) -> bool {
        matches!(self, Error::Inadmissible { .. } | Error::NewtonDiverged { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
