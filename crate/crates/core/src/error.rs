use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures reported by the library.
///
/// The variants split into two groups. `Domain`, `Config`, `Support` and
/// `Precondition` reject bad input. `Consistency` and `Integrality` mean an
/// exact identity the construction relies on did not hold; those are never
/// expected and callers should treat them as fatal. `Precision` means an
/// enclosure came out too wide to decide a question.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("grid function has no sample at lattice point q^{index}")]
    Support { index: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("integrality failure at n = {n}, p = {p}: {what} is not an integer")]
    Integrality { n: usize, p: u64, what: &'static str },

    #[error("insufficient precision: {0}")]
    Precision(String),
}

impl Error {
    /// True for failures of an exact identity (as opposed to bad input or
    /// insufficient working precision).
    pub fn is_identity_failure(&self) -> bool {
        matches!(self, Error::Consistency(_) | Error::Integrality { .. })
    }
}
