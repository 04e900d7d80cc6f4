use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("quadrature did not converge: {nodes} nodes, last change {change:e}")]
    QuadratureNotConverged { nodes: usize, change: f64 },

    #[error("density matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("eigensolver failure: {0}")]
    Eigen(String),

    #[error("measurement dynamics require gamma = 0 (got {0})")]
    AnisotropyUnsupported(f64),

    #[error("coupling {0} outside [0, 1) required by the zero-temperature channel")]
    CouplingOutOfRange(f64),

    #[error("chain size {0} outside the supported range")]
    ChainSize(usize),

    #[error("offset {0} is not stored in this correlator table")]
    MissingOffset(i64),

    #[error("degenerate conditioning: projected weight {0:e}")]
    DegenerateConditioning(f64),

    #[error("excitation front reaches the chain boundary (lambda*t = {0})")]
    WrapAround(f64),
}
