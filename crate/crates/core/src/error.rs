use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed number {0:?}")]
    BadNumber(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dataset dimension must be at least 1")]
    ZeroDimension,

    #[error("operation requires a 2D dataset, got dimension {0}")]
    NotPlanar(usize),

    #[error("points {0} and {1} have identical coordinates")]
    DuplicatePoint(u64, u64),

    #[error("point id {0} appears more than once")]
    DuplicateId(u64),

    #[error("point id must be at least 1")]
    InvalidId,

    #[error("probability of point {id} is {prob}, outside [0,1]")]
    ProbabilityOutOfRange { id: u64, prob: String },

    #[error("points {0}, {1} and {2} are collinear")]
    Collinear(u64, u64, u64),

    #[error("instance has {n} points, above the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("division by zero on a region with no pending zero factor")]
    ZeroUnderflow,

    #[error("unknown point {0}")]
    UnknownPoint(usize),

    #[error("invalid range: {0}")]
    InvalidRange(String),

    #[error("index order violated: need 1 <= i < j <= n, got i={i}, j={j}, n={n}")]
    IndexOrder { i: usize, j: usize, n: usize },

    #[error("points {0} and {1} share a color")]
    SameColor(u64, u64),

    #[error("directions coincide")]
    SameDirection,

    #[error("epsilon must lie in (0,1), got {0}")]
    BadEpsilon(String),

    #[error("sample count must be at least 1")]
    NoSamples,

    #[error("generator spec cannot be satisfied: {0}")]
    Unsatisfiable(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag for error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadNumber(_) => "bad_number",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroDimension => "zero_dimension",
            Error::NotPlanar(_) => "not_planar",
            Error::DuplicatePoint(..) => "duplicate_point",
            Error::DuplicateId(_) => "duplicate_id",
            Error::InvalidId => "invalid_id",
            Error::ProbabilityOutOfRange { .. } => "probability_out_of_range",
            Error::Collinear(..) => "collinear",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::ZeroUnderflow => "zero_underflow",
            Error::UnknownPoint(_) => "unknown_point",
            Error::InvalidRange(_) => "invalid_range",
            Error::IndexOrder { .. } => "index_order",
            Error::SameColor(..) => "same_color",
            Error::SameDirection => "same_direction",
            Error::BadEpsilon(_) => "bad_epsilon",
            Error::NoSamples => "no_samples",
            Error::Unsatisfiable(_) => "unsatisfiable",
            Error::Parse(_) => "parse",
        }
    }
}
