use thiserror::Error;

/// Rejections raised while assembling a [`System`](crate::System).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("a system needs at least one equation")]
    Empty,
    #[error("{formulas} formulas but {names} variable names")]
    ArityMismatch { formulas: usize, names: usize },
    #[error("`{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("name `{0}` is declared more than once")]
    DuplicateName(String),
    #[error("equation {equation} references state variable #{index}, but the system has {n}")]
    VarOutOfRange { equation: usize, index: usize, n: usize },
    #[error("equation {equation} references parameter #{index}, but the system has {count}")]
    ParamOutOfRange {
        equation: usize,
        index: usize,
        count: usize,
    },
}

/// Structural mismatches between arguments of an operation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("expected {expected} {what}, found {found}")]
    Length {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("state variable #{index} out of range for a valuation of length {len}")]
    VarOutOfRange { index: usize, len: usize },
    #[error("parameter #{index} out of range for an assignment of length {len}")]
    ParamOutOfRange { index: usize, len: usize },
    #[error("term dag does not match the system: {0}")]
    DagMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

/// A BES text parse failure, positioned at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn semantic(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Semantic,
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("the chain family needs an even n >= 2, got {0}")]
    ChainArity(usize),
    #[error("the sparse3 family has exactly 3 equations, got n = {0}")]
    Sparse3Arity(usize),
    #[error("n must be at least 1")]
    ZeroArity,
    #[error("density must lie in (0, 1], got {0}")]
    Density(f64),
    #[error("max_depth must be at least 1")]
    ZeroDepth,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmitError {
    #[error("unshared tree has {tree_size} nodes, over the limit of {limit}")]
    TooLarge { tree_size: String, limit: u64 },
    #[error("query variable #{index} out of range for a system with {n} variables")]
    QueryOutOfRange { index: usize, n: usize },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// DIMACS read failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimacs line {line}: {message}")]
pub struct DimacsError {
    pub line: usize,
    pub message: String,
}
