use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed ordinal: {0}")]
    Ordinal(String),

    #[error("sequence lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sequence is not a member of the universe carrier")]
    NotInCarrier,

    #[error("malformed tree: {0}")]
    Tree(String),

    #[error("invalid label tag: {0}")]
    Label(String),

    #[error("invalid skeleton: {0}")]
    Skeleton(String),

    #[error("dangling element reference: {0}")]
    Dangling(String),

    #[error("not a quasi-order: {0}")]
    QuasiOrder(String),

    #[error("presentation does not satisfy the sixth condition")]
    NotSixth,

    #[error("group input rejected: {0}")]
    Group(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
