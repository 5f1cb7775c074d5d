use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operands live in exterior algebras or groups of different rank.
    RankMismatch { left: usize, right: usize },
    /// Matrix or vector shapes are incompatible for the requested operation.
    ShapeMismatch(String),
    /// An index is outside its admissible range.
    IndexOutOfRange(String),
    /// The matrix is not square with determinant ±1.
    NotUnimodular,
    /// The unimodular matrix has no factorization into the available
    /// generators (only `[-1]` in rank one).
    NotFactorable,
    /// A conjugacy witness does not satisfy its defining block identity.
    MalformedWitness(String),
    /// Twisted-algebra operands carry different cocycle parameters.
    ThetaMismatch,
    /// A representation does not match the element's parameter.
    ParameterMismatch(String),
    /// Clock-and-shift parameters are not coprime or `q == 0`.
    NotCoprime { p: i64, q: i64 },
    /// A real parameter is outside its admissible range.
    OutOfRange(String),
    /// Sampled functions are defined on different grids.
    GridMismatch,
    /// Consecutive loop samples differ by at least π in phase.
    Aliasing { component: usize, sample: usize },
    /// Sampled phase total is not within tolerance of an integer.
    NonIntegralWinding { component: usize, value: f64 },
    /// Text input could not be parsed.
    Parse(String),
    /// Structural invariant of a value was violated.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::RankMismatch { left, right } => {
                write!(f, "incompatible ambient dimension: {left} vs {right}")
            }
            Error::ShapeMismatch(s) => write!(f, "shape mismatch: {s}"),
            Error::IndexOutOfRange(s) => write!(f, "index out of range: {s}"),
            Error::NotUnimodular => f.write_str("matrix is not unimodular"),
            Error::NotFactorable => f.write_str("matrix has no factorization into elementary and permutation matrices"),
            Error::MalformedWitness(s) => write!(f, "malformed conjugacy witness: {s}"),
            Error::ThetaMismatch => f.write_str("operands have different cocycle parameters"),
            Error::ParameterMismatch(s) => write!(f, "parameter mismatch: {s}"),
            Error::NotCoprime { p, q } => write!(f, "({p}, {q}) is not a coprime pair with q >= 1"),
            Error::OutOfRange(s) => write!(f, "out of range: {s}"),
            Error::GridMismatch => f.write_str("sampled functions use different grids"),
            Error::Aliasing { component, sample } => write!(
                f,
                "phase step of at least pi at sample {sample} of component {component}; sampling too coarse"
            ),
            Error::NonIntegralWinding { component, value } => {
                write!(f, "component {component} winds {value} times, not an integer")
            }
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Invalid(s) => write!(f, "invalid value: {s}"),
        }
    }
}

impl core::error::Error for Error {}
