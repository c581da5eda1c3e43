use alloc::string::String;
use core::fmt;

/// Errors surfaced by the computational kernel.
///
/// The CLI maps these onto exit statuses: parse failures are user errors,
/// size-limit failures mean the request exceeds the configured bounds, and
/// everything else signals a broken precondition or internal invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input text does not match the expected grammar.
    Parse(String),
    /// The request exceeds a configured size or work bound.
    SizeLimit(String),
    /// Two objects that must live in the same graded piece do not.
    DimensionMismatch(String),
    /// A finite-field representation is not nilpotent.
    NonNilpotent,
    /// A window truncation lost every lift of some translation class.
    WindowTooSmall(String),
    /// Monomials in the generators failed to expand unitriangularly.
    Spanning(String),
    /// Interpolated Hall polynomial disagreed with a held-out prime count.
    InterpolationMismatch(String),
    /// A periodic pair carries coinciding spectral classes.
    SpectralClash,
    /// Π_k requires gcd(k, h) = 1.
    GcdViolation { k: i64, h: i64 },
    /// Root-string closure did not terminate: not a finite-type Cartan matrix.
    NotFiniteType,
    /// An internal consistency check failed; indicates a convention bug.
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::SizeLimit(msg) => write!(f, "size limit exceeded: {msg}"),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NonNilpotent => write!(f, "representation is not nilpotent"),
            Error::WindowTooSmall(msg) => write!(f, "window too small: {msg}"),
            Error::Spanning(msg) => write!(f, "monomial spanning failure: {msg}"),
            Error::InterpolationMismatch(msg) => {
                write!(f, "hall polynomial verification failed: {msg}")
            }
            Error::SpectralClash => write!(f, "periodic pair has coinciding spectral classes"),
            Error::GcdViolation { k, h } => {
                write!(f, "k = {k} is not coprime to the Coxeter number h = {h}")
            }
            Error::NotFiniteType => write!(f, "Cartan matrix is not of finite type"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
