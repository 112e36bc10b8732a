use thiserror::Error;

/// Errors raised by the computational layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("lattice has rank 0")]
    RankZero,

    #[error("integer overflow in exact lattice arithmetic")]
    Overflow,

    #[error("ill-conditioned multiplicity at x = {x}: winding {winding} (residual {residual})")]
    IllConditionedMultiplicity { x: f64, winding: f64, residual: f64 },

    #[error("increase quadrature density: winding {winding} (residual {residual})")]
    WindingResidual { winding: f64, residual: f64 },

    #[error("persistent root on contour after {retries} dilations")]
    ContourRoot { retries: usize },

    #[error("not effectively self-dual: max imaginary part {max_imag}")]
    NotSelfDual { max_imag: f64 },

    #[error("singular point on Z_r(P) near ({0}, {1})")]
    SingularPoint(f64, f64),

    #[error("component did not close after {steps} steps")]
    NonClosure { steps: usize },

    #[error("traced lift displacement is not integral: residual {residual}")]
    NonIntegerWinding { residual: f64 },

    #[error("component not transverse to any coordinate; homotopy trivial")]
    TrivialHomotopy,

    #[error("quadrature did not converge: error estimate {estimate}")]
    Quadrature { estimate: f64 },

    #[error("insufficient table coverage; missing k: {missing:?}")]
    InsufficientCoverage { missing: Vec<Vec<i64>> },

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::RankZero => "rank_zero",
            Error::Overflow => "overflow",
            Error::IllConditionedMultiplicity { .. } => "ill_conditioned_multiplicity",
            Error::WindingResidual { .. } => "winding_residual",
            Error::ContourRoot { .. } => "contour_root",
            Error::NotSelfDual { .. } => "not_self_dual",
            Error::SingularPoint(..) => "singular_point",
            Error::NonClosure { .. } => "non_closure",
            Error::NonIntegerWinding { .. } => "non_integer_winding",
            Error::TrivialHomotopy => "trivial_homotopy",
            Error::Quadrature { .. } => "quadrature",
            Error::InsufficientCoverage { .. } => "insufficient_coverage",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}
