use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid number field: {0}")]
    InvalidField(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("invalid relative extension: {0}")]
    InvalidExtension(String),
    #[error("operation undefined for the zero ideal")]
    ZeroIdeal,
    #[error("prime {0} divides the index of the power order; Kummer-Dedekind does not apply")]
    UnsupportedPrime(u64),
    #[error("norm has a cofactor of {bits} bits with no prime factor below the trial bound {bound}")]
    FactorizationBound { bits: u64, bound: u64 },
    #[error("ideal is not a square: {0}")]
    NotASquare(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("z = -x/y is undefined at {0}")]
    NoParameter(&'static str),
    #[error("point is not close to the identity at this prime (v(x) = {0})")]
    NotNearIdentity(i64),
    #[error("inconsistent valuations: {0}")]
    InconsistentValuation(String),
    #[error("series precision {0} is below the minimum of 3")]
    PrecisionTooSmall(usize),
    #[error("no multiple k*r*P1 with k <= {0} has the required denominator")]
    BoundExceeded(u64),
    #[error("no witness exists")]
    NoWitness,
    #[error("predicate is false: {0}")]
    PredicateFalse(String),
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("ell is too small for this certificate: {0}")]
    EllTooSmall(String),
    #[error("element is not in the image of O_F: {0}")]
    NotInBaseRing(String),
    #[error("certificate error: {0}")]
    Certificate(String),
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("instance failed validation: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// A stable snake_case tag for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::FieldMismatch => "field_mismatch",
            Error::InvalidField(_) => "invalid_field",
            Error::InvalidElement(_) => "invalid_element",
            Error::InvalidExtension(_) => "invalid_extension",
            Error::ZeroIdeal => "zero_ideal",
            Error::UnsupportedPrime(_) => "unsupported_prime",
            Error::FactorizationBound { .. } => "factorization_bound",
            Error::NotASquare(_) => "not_a_square",
            Error::InvalidCurve(_) => "invalid_curve",
            Error::NotOnCurve => "not_on_curve",
            Error::NoParameter(_) => "no_parameter",
            Error::NotNearIdentity(_) => "not_near_identity",
            Error::InconsistentValuation(_) => "inconsistent_valuation",
            Error::PrecisionTooSmall(_) => "precision_too_small",
            Error::BoundExceeded(_) => "bound_exceeded",
            Error::NoWitness => "no_witness",
            Error::PredicateFalse(_) => "predicate_false",
            Error::Domain(_) => "domain",
            Error::EllTooSmall(_) => "ell_too_small",
            Error::NotInBaseRing(_) => "not_in_base_ring",
            Error::Certificate(_) => "certificate",
            Error::Config { .. } => "config",
            Error::Validation(_) => "validation",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
