use thiserror::Error;

use crate::cost_dioid::DioidKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DioidError {
    #[error("unknown dioid kind `{0}`")]
    UnknownKind(String),
    #[error("dioid `{0}` needs a declared universe")]
    MissingUniverse(DioidKind),
    #[error("universe of {0} elements exceeds the supported maximum of 64")]
    UniverseTooLarge(usize),
    #[error("duplicate universe element `{0}`")]
    DuplicateUniverseElement(String),
    #[error("value {value} is not in the {kind} carrier")]
    CarrierMismatch { kind: DioidKind, value: String },
    #[error("invalid {kind} literal `{literal}`")]
    InvalidLiteral { kind: DioidKind, literal: String },
    #[error("`{0}` is not in the declared universe")]
    NotInUniverse(String),
    #[error("0th root is undefined")]
    ZeroRoot,
    #[error("star did not stabilize within {0} iterations")]
    StarIterationCap(usize),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("operands belong to different dioids")]
    DioidMismatch,
    #[error("matrix must be square, got {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix dimensions must be positive")]
    Empty,
    #[error(transparent)]
    Dioid(#[from] DioidError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(String, String),
    #[error("missing `{0}` declaration")]
    Missing(&'static str),
    #[error(transparent)]
    Dioid(#[from] DioidError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("state list is empty")]
    NoStates,
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("{0} set is empty")]
    EmptySet(&'static str),
    #[error("path must contain at least one edge")]
    PathTooShort,
    #[error("path uses a missing edge {0} -> {1}")]
    MissingEdge(String, String),
    #[error("transition matrix must be {expected}x{expected}, got {rows}x{cols}")]
    MatrixShape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Dioid(#[from] DioidError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbstractionError {
    #[error("concrete state `{0}` has no image")]
    PartialMap(String),
    #[error("unknown abstract state `{0}`")]
    UnknownAbstractState(String),
    #[error("unknown concrete state `{0}`")]
    UnknownConcreteState(String),
    #[error("concrete states of the system and the lift differ")]
    StateMismatch,
    #[error("dioid is not selective; the check requires selectivity")]
    NotSelective,
    #[error("line {line}: {message}")]
    MapSyntax { line: usize, message: String },
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order relation is not antisymmetric at `{0}` and `{1}`")]
    NotAntisymmetric(String, String),
    #[error("`{0}` and `{1}` have no least upper bound")]
    NoJoin(String, String),
    #[error("`{0}` and `{1}` have no greatest lower bound")]
    NoMeet(String, String),
    #[error("lattice is empty")]
    Empty,
    #[error("lattice is not boolean: {0}")]
    NotBoolean(String),
    #[error("even-interval bound must be a positive even integer, got {0}")]
    InvalidBound(i64),
    #[error("atom `{0}` has no image")]
    PartialAlpha(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinearError {
    #[error("abstraction matrix is {alpha_rows}x{alpha_cols}, concrete matrix {concrete}x{concrete}, abstract matrix {abstract_dim}x{abstract_dim}")]
    Shape {
        alpha_rows: usize,
        alpha_cols: usize,
        concrete: usize,
        abstract_dim: usize,
    },
    #[error("abstraction matrix entry ({row}, {col}) is neither bot nor e")]
    NonBooleanAlpha { row: usize, col: usize },
    #[error("state index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("{0} is not selective; the check requires selectivity")]
    NotSelective(DioidKind),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}
