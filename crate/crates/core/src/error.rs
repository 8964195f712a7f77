use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(usize, usize),

    #[error("base points differ: {0} vs {1}")]
    BasePointMismatch(f64, f64),

    #[error("non-finite sample at {0}")]
    NonFiniteSample(String),

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("degree {found} is below the required {required}")]
    DegreeTooLow { required: usize, found: usize },

    #[error("constant-term germ vanishes; strip the z^e factor first")]
    ZFactorRequired,

    #[error("discriminant germ is numerically zero")]
    Degenerate,

    #[error("contour crossed by a root: winding number {winding} is not an integer (cluster at {center})")]
    ContourBreach { center: String, winding: f64 },

    #[error("factor reconstruction residual {residual:e} exceeds {limit:e}")]
    QuadratureFailure { residual: f64, limit: f64 },

    #[error("p*q odd for the single kicked rotor; re-run with (p, q) = ({p}, {q})")]
    HalfAlpha { p: u64, q: u64 },

    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: u64, q: u64 },

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("spectrum spaces differ")]
    SpaceMismatch,

    #[error("t grid is not contained in one period [0, {period})")]
    GridOutsidePeriod { period: f64 },

    #[error("ambiguous root crossing in s interval [{lo}, {hi}]")]
    AmbiguousCrossing { lo: f64, hi: f64 },

    #[error("paths do not close: end and start root sets differ by {0:e}")]
    ClosureViolation(f64),

    #[error("eigenvalue solver failed to converge")]
    EigenFailure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Short machine-readable tag used in diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OrderMismatch(..) => "ORDER_MISMATCH",
            Error::BasePointMismatch(..) => "BASE_POINT_MISMATCH",
            Error::NonFiniteSample(_) => "NON_FINITE_SAMPLE",
            Error::ZeroLeadingCoefficient => "ZERO_LEADING_COEFFICIENT",
            Error::NotMonic => "NOT_MONIC",
            Error::DegreeTooLow { .. } => "DEGREE_TOO_LOW",
            Error::ZFactorRequired => "Z_FACTOR_REQUIRED",
            Error::Degenerate => "DEGENERATE",
            Error::ContourBreach { .. } => "CONTOUR_BREACH",
            Error::QuadratureFailure { .. } => "QUADRATURE_FAILURE",
            Error::HalfAlpha { .. } => "HALF_ALPHA",
            Error::NotCoprime { .. } => "NOT_COPRIME",
            Error::NotUnitary(_) => "NOT_UNITARY",
            Error::SpaceMismatch => "SPACE_MISMATCH",
            Error::GridOutsidePeriod { .. } => "GRID_OUTSIDE_PERIOD",
            Error::AmbiguousCrossing { .. } => "AMBIGUOUS_CROSSING",
            Error::ClosureViolation(_) => "CLOSURE_VIOLATION",
            Error::EigenFailure => "EIGEN_FAILURE",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
        }
    }

    /// Errors caused by numerics rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::AmbiguousCrossing { .. }
                | Error::QuadratureFailure { .. }
                | Error::ContourBreach { .. }
                | Error::ClosureViolation(_)
                | Error::EigenFailure
                | Error::Degenerate
        )
    }
}
