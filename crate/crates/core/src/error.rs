use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("iteration did not settle within {iterations} steps")]
    NonConvergence { iterations: usize },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("pairing α(v) = {0:e} is not positive")]
    NotInL(f64),
    #[error("not transverse (margin {0:e})")]
    NotTransverse(f64),
    #[error("tangent vectors live over different base points")]
    BaseMismatch,
    #[error("element budget of {cap} exceeded")]
    BudgetExceeded { cap: usize },
    #[error("conjugacy classes require a free presentation")]
    UnsupportedPresentation,
    #[error("element is not proximal: {0}")]
    NotProximal(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("point is not on the unstable leaf (defect {0:e})")]
    NotOnLeaf(f64),
    #[error("reference ball has zero diameter at sampling resolution")]
    DegenerateBall,
    #[error("no atlas point gives a stable-leaf sample within eps = {0:e}")]
    NoStableSample(f64),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("abscissa violation at Re(s) = {re}: {reason}")]
    AbscissaViolation { re: f64, reason: String },
    #[error("ping-pong failure between intervals {first} and {second}")]
    PingPongFailure { first: String, second: String },
    #[error("vector is not isotropic (⟨u,u⟩ = {0:e})")]
    NotIsotropic(f64),
    #[error("degenerate span: {0}")]
    DegenerateSpan(String),
    #[error("point is not in the interior of the convex body")]
    NotInterior,
    #[error("chord is degenerate: {0}")]
    DegenerateChord(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not unimodular (det {0:e})")]
    NotUnimodular(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
