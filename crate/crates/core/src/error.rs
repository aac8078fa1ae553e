use thiserror::Error;

/// Errors surfaced by the algebra kernel.
///
/// Every fallible operation returns one of these; panics are reserved for
/// internal invariant violations (e.g. arithmetic between scalars of
/// different fields after the public API already validated the rings).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("coefficient field mismatch: {0}")]
    FieldMismatch(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("expected homogeneous input: {0}")]
    NotHomogeneous(String),

    #[error("degree out of range: {0}")]
    DegreeRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("input vectors are linearly dependent (their wedge vanishes)")]
    DependentVectors,

    #[error("multivector is not decomposable: a Grassmann relation fails")]
    NotDecomposable,

    #[error("grade mismatch: {0}")]
    GradeMismatch(String),

    #[error("no greedy binomial representation: {0}")]
    NoBinomialRepresentation(String),

    #[error("Hilbert polynomial stabilization not reached below degree {0}")]
    StabilizationCap(u32),

    #[error("Hilbert polynomial mismatch: expected {expected}, found {found}")]
    HilbertMismatch { expected: String, found: String },

    #[error("graded piece has dimension {found}, expected {expected}")]
    GradedDimensionMismatch { expected: usize, found: usize },

    #[error("ideal is not saturated")]
    Unsaturated,

    #[error("point does not satisfy the scheme equations")]
    OffScheme,

    #[error("point {0} lies outside the universe")]
    OutsideUniverse(String),

    #[error("set is not a member of the closed family")]
    NotInFamily,

    #[error("the empty set has no degree")]
    EmptyDegree,

    #[error("unsupported base field descriptor: {0}")]
    UnsupportedBase(String),

    #[error("lambda coefficient is zero: the designated dependence fails")]
    ZeroLambdaValue,

    #[error("instances do not share a common shape: {0}")]
    ShapeMismatch(String),

    #[error("variable clash: {0}")]
    VariableClash(String),

    #[error("formula is not block-homogeneous: {0}")]
    NotBlockHomogeneous(String),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
