use std::fmt;

/// Errors surfaced by the library. Numerical tolerances are baked into the
/// variants' messages where they matter for diagnosis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A polynomial operation produced a monomial above the degree cap.
    DegreeCap { degree: usize, cap: usize },
    /// Text that could not be parsed (polynomials, configs, matrix files).
    Parse(String),
    /// An operation's precondition was violated by the caller.
    Precondition(String),
    /// An iterative solver failed to converge; carries diagnostics.
    NoConvergence(String),
    /// A linear fit was rank-deficient; carries the offending basis info.
    RankDeficient(String),
    /// A mathematical invariant the implementation must satisfy failed;
    /// this falsifies the pipeline, not the theory.
    Invariant(String),
    /// Binary/text serialization problems.
    Format(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeCap { degree, cap } => {
                write!(
                    f,
                    "monomial degree {degree} exceeds the configured cap {cap}"
                )
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::NoConvergence(msg) => write!(f, "no convergence: {msg}"),
            Error::RankDeficient(msg) => write!(f, "rank-deficient fit: {msg}"),
            Error::Invariant(msg) => write!(f, "invariant violated: {msg}"),
            Error::Format(msg) => write!(f, "format error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
