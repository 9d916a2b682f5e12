//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by diagram construction, normalization and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A Laurent polynomial failed the annihilator normalization checks.
    #[error("polynomial does not evaluate to 1 at t=1 (got {value})")]
    NotOneAtOne { value: String },
    /// The symmetry shift required by `p(t^{-1}) = t^{-s} p(t)` is outside {0, 1}.
    #[error("polynomial symmetry requires shift {required}, outside {{0, 1}}")]
    BadSymmetryShift { required: String },
    /// Zero polynomial where a nonzero one is required.
    #[error("zero polynomial is not allowed here")]
    ZeroPolynomial,
    /// Two beads or sums built over different delta contexts were mixed.
    #[error("mixed delta contexts: {0} vs {1}")]
    ContextMismatch(String, String),
    /// Two sums of different loop degrees were combined.
    #[error("loop degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    /// A diagram violated a structural invariant.
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    /// An operation required monomial beads but found a general one.
    #[error("bead on edge {edge} is not a monomial")]
    NonMonomialBead { edge: usize },
    /// A bead was not divisible by delta where a genuine polynomial is needed.
    #[error("bead on edge {edge} is not a polynomial multiple of delta")]
    NonPolynomialBead { edge: usize },
    /// A linking table query had no entry.
    #[error("missing linking table entry for ({0},{1})-({2},{3})")]
    MissingLinking(usize, usize, usize, usize),
    /// A linking table entry contradicted its exchange-symmetric partner.
    #[error("linking table entry ({0},{1})-({2},{3}) contradicts its conjugate partner")]
    AsymmetricLinking(usize, usize, usize, usize),
    /// The leg set of a pairing problem has odd cardinality.
    #[error("cannot pair an odd number of legs ({0})")]
    OddLegCount(usize),
    /// An enumeration or sweep exceeded its configured budget.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A window or truncation request was unusable.
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    /// A series operation was applied outside its domain.
    #[error("series domain error: {0}")]
    SeriesDomain(String),
    /// A structural self-check failed; indicates an internal inconsistency.
    #[error("internal check failed: {0}")]
    InternalCheck(String),
    /// Syntax error in a textual input.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    /// Semantic error in a textual or JSON input.
    #[error("invalid input: {0}")]
    Validation(String),
}

impl Error {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
