use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Bargmann index k = {0}")]
    InvalidK(f64),
    #[error("cutoff {0} is too small")]
    InvalidCutoff(usize),
    #[error("parity-restricted cutoff must be even, got {0}")]
    OddCutoff(usize),
    #[error("operands live on different bases")]
    BasisMismatch,
    #[error("operator is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("u = 0 is not supported")]
    ZeroU,
    #[error("degenerate Killing form (w^2 = 4uv)")]
    DegenerateKilling,
    #[error("parameters are not normalizable (margin {margin:.3e})")]
    NotNormalizable { margin: f64 },
    #[error("series did not converge: tail mass {tail_mass:.3e} at cutoff {cutoff}")]
    NonConvergent { tail_mass: f64, cutoff: usize },
    #[error("matrix B is singular (condition number {cond:.3e})")]
    SingularB { cond: f64 },
    #[error("beta1 block is singular")]
    SingularBeta1,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("requires w = 0")]
    RequiresW0,
    #[error("requires |u| > |v|")]
    RequiresUOverV,
    #[error("|chi| must exceed 1, got {0}")]
    InvalidChi(f64),
    #[error("projection probability {0:.3e} is too small")]
    ZeroProbability(f64),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
