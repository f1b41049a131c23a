//! Error types shared across the crate.

use thiserror::Error;

/// Errors from exact scalar arithmetic over the generator tower.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    /// The element is nonzero but not invertible. With a reducible defining
    /// polynomial this signals that the tower should be split on a factor.
    #[error("zero divisor: {0}")]
    ZeroDivisor(String),
    #[error("unit symbol `{0}` has no numeric value")]
    UnboundUnit(String),
}

/// Errors from tower construction.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TowerError {
    #[error("defining polynomial is not monic of degree >= 2")]
    NonMonic,
    #[error("embedding hint does not isolate a single root: {0}")]
    NonIsolating(String),
}

/// Errors from equation construction and residual machinery.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EquationError {
    #[error("exponent polynomial d must be non-constant")]
    ConstantExponent,
    #[error("a*b*c vanishes identically; pass the degenerate flag to classify via the remark cases")]
    DegenerateCoefficients,
    #[error("auxiliary polynomial {0} vanishes identically, contradicting the nondegeneracy assumptions")]
    VanishingAux(&'static str),
}

/// Errors from the classifier and constraint solver.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("constraint system is not univariate-triangular: {0}")]
    CapabilityExceeded(String),
    #[error("no candidate degree balances the constraint")]
    Empty,
    #[error("two or more of a, b, c vanish identically")]
    MultipleDegeneracies,
    #[error("equation is not degenerate; use classify")]
    NotDegenerate,
    #[error("binding violates a defining relation: {0}")]
    RelationViolated(String),
    #[error("parameter `{0}` is not bound")]
    MissingBinding(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

/// Errors from the numeric Nevanlinna module.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericError {
    #[error("denominator has a zero on the integration circle after {0} radius perturbations")]
    PoleOnCircle(u32),
    #[error("integration contour passes through a zero")]
    ContourThroughZero,
    #[error("argument-principle integral did not converge (residual {0})")]
    NonConvergent(f64),
    #[error("the zero function has no growth data")]
    ZeroFunction,
    #[error("unit symbol `{0}` has no numeric value")]
    UnboundUnit(String),
}

/// Parse errors with source spans.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {span:?}: {msg}")]
    SyntaxError { span: (usize, usize), msg: String },
    #[error("exponent argument at {span:?} is not a polynomial in z")]
    NonPolynomialExponent { span: (usize, usize) },
    #[error("left side does not match any of the four binomial shapes")]
    UnrecognizedShape,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
}
