use thiserror::Error;

/// Everything that can go wrong in the toolkit.
///
/// Variant names double as the machine-readable error names emitted by the
/// command-line reports, so renaming one is a wire-format change.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision error: {0}")]
    Precision(String),
    #[error("series has zero leading coefficient to known precision")]
    ZeroLeadingCoefficient,
    #[error("substitution requires a zero constant term")]
    NonzeroConstantTerm,
    #[error("Newton iteration failed to converge: {0}")]
    NoConvergence(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("polynomial is not separable to working precision")]
    NotSeparable,
    #[error("residual polynomial needs a field extension: {0}")]
    ResidualFieldExtensionRequired(String),
    #[error("factor is not Eisenstein after shifting: {0}")]
    NotEisenstein(String),
    #[error("no element realizes quotient dimension {0} in the working window")]
    NoSuchElement(i64),
    #[error("window computation is unstable: {0}")]
    WindowUnstable(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("spectral cover is not totally ramified (partition {0:?})")]
    NotTotallyRamified(Vec<usize>),
    #[error("no cyclic vector found")]
    NoCyclicVector,
    #[error("determinant is not divisible by the Vandermonde product")]
    NotDivisible,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable name used in JSON error reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Precision(_) => "PrecisionError",
            Error::ZeroLeadingCoefficient => "ZeroLeadingCoefficient",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NotInvertible(_) => "NotInvertible",
            Error::NotSeparable => "NotSeparable",
            Error::ResidualFieldExtensionRequired(_) => "ResidualFieldExtensionRequired",
            Error::NotEisenstein(_) => "NotEisenstein",
            Error::NoSuchElement(_) => "NoSuchElement",
            Error::WindowUnstable(_) => "WindowUnstable",
            Error::UnknownFixture(_) => "UnknownFixture",
            Error::NotTotallyRamified(_) => "NotTotallyRamified",
            Error::NoCyclicVector => "NoCyclicVector",
            Error::NotDivisible => "NotDivisible",
            Error::Dimension(_) => "DimensionMismatch",
            Error::Parse(_) => "ParseError",
        }
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
