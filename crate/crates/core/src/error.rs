use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} size {n} exceeds the configured limit {limit}")]
    SizeLimit { what: &'static str, n: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid parameters p={p}, q={q}: need 0 <= p < q")]
    InvalidParams { p: u32, q: u32 },

    #[error("invalid word {word}: {reason}")]
    InvalidWord { word: String, reason: String },

    #[error("invalid path {path}: {reason}")]
    InvalidPath { path: String, reason: String },

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("{object} is not a member of {family}")]
    NotInFamily { family: String, object: String },

    #[error("the root of {0} has no father")]
    RootHasNoFather(String),

    #[error("site {site} out of range 1..={max}")]
    SiteOutOfRange { site: usize, max: usize },

    #[error("invalid tree path at level {level}: {reason}")]
    InvalidTreePath { level: usize, reason: String },

    #[error("no object-level bijection registered between {from} and {to}")]
    UnsupportedPair { from: String, to: String },

    #[error("internal consistency error: {0}")]
    Consistency(String),
}
