use alloc::string::String;

/// Failure to parse a rational number or polynomial from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{input}`: {reason}")]
pub struct ParseError {
    pub input: String,
    pub reason: &'static str,
}

impl ParseError {
    pub fn new(input: String, reason: &'static str) -> Self {
        ParseError { input, reason }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomials over different variable lists ({0} vs {1} variables)")]
    VariableMismatch(usize, usize),
    #[error("elements belong to different parametric contexts")]
    ContextMismatch,
    #[error("duplicate parameter name `{0}`")]
    DuplicateName(String),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("at most {0} parameters are supported")]
    TooManyVariables(usize),
    #[error("the parameters do not describe a function of this family")]
    NotConstructible,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("inconsistent constraint recorded: {0}")]
    InconsistentLedger(String),
    #[error("invalid slice: {0}")]
    InvalidSlice(String),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
