use thiserror::Error;

use crate::poly::Monomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("variable index {index} out of range for {nvars} variables")]
    VariableIndex { index: usize, nvars: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("exponent at position {pos} must be a positive integer")]
    BadExponent { pos: usize },
    #[error("at least 3 variables are required, got {0}")]
    TooFewVariables(usize),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradingError {
    #[error("weights must be positive integers")]
    NonPositiveWeight,
    #[error("at least 3 variables are required, got {0}")]
    TooFewVariables(usize),
    #[error("weight system has {weights} entries but the polynomial has {nvars} variables")]
    ArityMismatch { weights: usize, nvars: usize },
    #[error("the zero polynomial has no quasidegree")]
    ZeroPolynomial,
    #[error("not quasihomogeneous: monomial {monomial} has degree {found}, expected {expected}")]
    NotQuasihomogeneous {
        monomial: Monomial,
        expected: i64,
        found: i64,
    },
    #[error("resonance: monomial {monomial} has quasidegree equal to {p}")]
    Resonance { monomial: Monomial, p: i64 },
    #[error("no positive weight system makes the polynomial quasihomogeneous")]
    NoWeights,
    #[error("the quasihomogeneous weights are not unique for this polynomial")]
    AmbiguousWeights,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MilnorError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("f(0) must vanish")]
    NonZeroAtOrigin,
    #[error("infinite codimension: {0}")]
    InfiniteCodimension(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("forms live on different spaces: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },
    #[error("cannot contract a 0-form")]
    ContractZeroForm,
    #[error("expected a form of degree {expected}, got {found}")]
    WrongDegree { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error("form degree {k} out of range 0..={n}")]
    FormDegree { k: usize, n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no solution in polynomial slice (form degree {k}, quasidegree {m})")]
    NoSolution { k: usize, m: i64 },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NormalFormError {
    #[error("invalid singularity class: {0}")]
    InvalidClass(String),
}

/// Umbrella error for the high-level entry points.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error(transparent)]
    Milnor(#[from] MilnorError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}
