use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("degree must be positive")]
    ZeroDegree,

    #[error("images do not form a bijection on 0..{degree}")]
    NotBijection { degree: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    /// A size limit was hit by an operation that needs full materialization.
    #[error("{what} cap exceeded: needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("group is not transitive")]
    NotTransitive,

    #[error("partition is not a block system: {0}")]
    InvalidBlockSystem(String),

    #[error("partition is not invariant under generator {generator}")]
    NotInvariant { generator: String },

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("invalid column selection: {0}")]
    InvalidColumns(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("group `{id}` records order {recorded} but generates order {computed}")]
    OrderMismatch {
        id: String,
        recorded: u128,
        computed: u128,
    },

    #[error("group `{0}` defined twice")]
    DuplicateGroup(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
