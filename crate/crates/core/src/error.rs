use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("not a normal subgroup: {0}")]
    NotNormal(String),

    #[error("group too large for {what}: order {order} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        order: u128,
        limit: u128,
    },

    #[error("subgroup is not a member of the lattice")]
    NotInLattice,

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("module error: {0}")]
    Module(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::TooLarge { .. } => 2,
            Error::Consistency(_) => 3,
            _ => 1,
        }
    }
}
