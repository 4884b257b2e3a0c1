use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("initial and final states are the same ray; no unique Hamiltonian")]
    ParallelStates,
    #[error("energy gap must be positive, got {0}")]
    BadGap(f64),
    #[error("target overlap {target} is not reachable with these parameters (arcsin argument {argument})")]
    Unreachable { target: f64, argument: f64 },
    #[error("invalid three-level specification: {0}")]
    BadSpec(String),
    #[error("PT symmetry is broken: s^2 - r^2 sin^2(theta) = {discriminant}")]
    BrokenPt { discriminant: f64, exceptional: bool },
    #[error("CP is not positive definite (smallest eigenvalue {0})")]
    NotPositive(f64),
    #[error("no orthonormal completion of the frame: {0}")]
    CompletionFailure(String),
    #[error("energy drift {drift:e} exceeds tolerance {tolerance:e}; reduce the step size")]
    StepTooLarge { drift: f64, tolerance: f64 },
    #[error("orbit did not close within {0} time units")]
    NoClosure(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZERO_VECTOR",
            Error::ParallelStates => "PARALLEL_STATES",
            Error::BadGap(_) => "BAD_GAP",
            Error::Unreachable { .. } => "UNREACHABLE",
            Error::BadSpec(_) => "BAD_SPEC",
            Error::BrokenPt { .. } => "BROKEN_PT",
            Error::NotPositive(_) => "NOT_POSITIVE",
            Error::CompletionFailure(_) => "COMPLETION_FAILURE",
            Error::StepTooLarge { .. } => "STEP_TOO_LARGE",
            Error::NoClosure(_) => "NO_CLOSURE",
            Error::InvalidInput(_) => "INVALID_INPUT",
        }
    }

    /// Secondary diagnostic tag, currently only `EXCEPTIONAL` for a
    /// defective Hamiltonian sitting exactly on the PT boundary.
    pub fn tag(&self) -> Option<&'static str> {
        match self {
            Error::BrokenPt {
                exceptional: true, ..
            } => Some("EXCEPTIONAL"),
            _ => None,
        }
    }
}
