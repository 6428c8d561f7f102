//! Error type shared by every numerical routine in the crate.

use core::fmt;

/// Everything that can go wrong across the pipeline.
///
/// Carries the offending quantity so callers can report actionable messages
/// without re-deriving it.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimension below the smallest the routine is defined for.
    BadDimension { n: usize, min: usize },
    /// Boundary discretization too coarse to place any node on the flat side.
    TooCoarse { k: usize, n: usize },
    /// A pivot collapsed during elimination.
    SingularSystem { pivot: f64 },
    /// An iteration hit its cap without meeting its tolerance.
    NoConvergence { iterations: usize },
    /// Matrix handed to the Hermitian eigensolver is not Hermitian.
    NotHermitian { max_asymmetry: f64 },
    /// Two collocation nodes (indices given) coincide.
    CoincidentNodes { i: usize, j: usize },
    /// Winding number of the node polygon about the origin is not one.
    OriginOutside { winding: f64 },
    /// Blaschke root on or outside the unit circle.
    RootOnCircle { modulus: f64 },
    /// Tangential polynomial asked for the direction u = v = 0.
    DegenerateDirection,
    /// Leading map coefficient too small to invert the series.
    DegenerateMap { c1_abs: f64 },
    /// Rational map evaluated too close to a pole.
    PoleProximity { denominator_abs: f64 },
    /// Free-parameter vector has the wrong length for this dimension.
    BadFreeLength { expected: usize, got: usize },
    /// A precondition on a scalar argument failed.
    BadInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadDimension { n, min } => {
                write!(f, "dimension {n} below minimum {min}")
            }
            Error::TooCoarse { k, n } => {
                write!(f, "discretization n = {n} too coarse for k = {k}: no node lands on the flat side")
            }
            Error::SingularSystem { pivot } => {
                write!(f, "system numerically singular (pivot {pivot:e})")
            }
            Error::NoConvergence { iterations } => {
                write!(f, "iteration failed to converge within {iterations} steps")
            }
            Error::NotHermitian { max_asymmetry } => {
                write!(f, "matrix not Hermitian (max asymmetry {max_asymmetry:e})")
            }
            Error::CoincidentNodes { i, j } => {
                write!(f, "collocation nodes {i} and {j} coincide")
            }
            Error::OriginOutside { winding } => {
                write!(f, "origin not enclosed by boundary (winding {winding:.6})")
            }
            Error::RootOnCircle { modulus } => {
                write!(f, "Blaschke root modulus {modulus} not strictly inside the unit circle")
            }
            Error::DegenerateDirection => {
                write!(f, "tangential polynomial direction u = v = 0 is degenerate")
            }
            Error::DegenerateMap { c1_abs } => {
                write!(f, "map derivative |c1| = {c1_abs:e} too small to invert")
            }
            Error::PoleProximity { denominator_abs } => {
                write!(f, "rational map denominator |q| = {denominator_abs:e} below pole guard")
            }
            Error::BadFreeLength { expected, got } => {
                write!(f, "expected {expected} free parameters, got {got}")
            }
            Error::BadInput(what) => write!(f, "bad input: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
