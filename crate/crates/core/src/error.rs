use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different quadratic fields: Q(√{0}) and Q(√{1})")]
    MixedDiscriminant(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse number: {0}")]
    Parse(String),

    #[error("basis matrix is singular")]
    DegenerateBasis,
    #[error("not a positive basis: {0}")]
    NotPositiveBasis(String),
    #[error("t = {0} lies on a grid line")]
    OnGridLine(String),
    #[error("the cut line meets a lattice point (index {0})")]
    SingularLine(i64),
    #[error("floor argument is an integer at index {0}")]
    SingularIndex(i64),
    #[error("asymmetric singular forms need sigma1 = -sigma2")]
    InconsistentSigns,
    #[error("invalid floor-form parameters: {0}")]
    InvalidParams(String),

    #[error("basis change is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("bases do not span the same lattice")]
    NotSameLattice,
    #[error("unprimed basis must be strictly wider in the perpendicular direction")]
    WidthOrder,
    #[error("could not read off a substitution rule: {0}")]
    AmbiguousReadoff(String),
    #[error("word cannot be parsed by the rule: {0}")]
    UnparseableWord(String),
    #[error("invalid tile word: {0}")]
    InvalidWord(String),

    #[error("tau has no irrational eigenvalues")]
    DegenerateEigen,
    #[error("spec is not self-similar under the given tau")]
    NotSelfSimilar,
    #[error("irreducible count {count} is not divisible by s = {s}")]
    DivisibilityViolation { s: u32, count: String },
    #[error("s = {0} exceeds the supported maximum of 64")]
    InflationTooDeep(u32),

    #[error("interval refinement exhausted after {0} steps")]
    PrecisionExhausted(u32),
    #[error("grid hyperplanes of two families cross the line at the same time")]
    GridCoincidence,
    #[error("invalid number field: {0}")]
    InvalidField(String),

    #[error("nothing to render")]
    EmptyPayload,
    #[error("unknown catalog case {0:?}")]
    UnknownCase(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MixedDiscriminant(..) => "MixedDiscriminant",
            Error::DivisionByZero => "DivisionByZero",
            Error::Parse(_) => "Parse",
            Error::DegenerateBasis => "DegenerateBasis",
            Error::NotPositiveBasis(_) => "NotPositiveBasis",
            Error::OnGridLine(_) => "OnGridLine",
            Error::SingularLine(_) => "SingularLine",
            Error::SingularIndex(_) => "SingularIndex",
            Error::InconsistentSigns => "InconsistentSigns",
            Error::InvalidParams(_) => "InvalidParams",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NotSameLattice => "NotSameLattice",
            Error::WidthOrder => "WidthOrder",
            Error::AmbiguousReadoff(_) => "AmbiguousReadoff",
            Error::UnparseableWord(_) => "UnparseableWord",
            Error::InvalidWord(_) => "InvalidWord",
            Error::DegenerateEigen => "DegenerateEigen",
            Error::NotSelfSimilar => "NotSelfSimilar",
            Error::DivisibilityViolation { .. } => "DivisibilityViolation",
            Error::InflationTooDeep(_) => "InflationTooDeep",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::GridCoincidence => "GridCoincidence",
            Error::InvalidField(_) => "InvalidField",
            Error::EmptyPayload => "EmptyPayload",
            Error::UnknownCase(_) => "UnknownCase",
        }
    }
}
