use thiserror::Error;

use crate::model::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid CP-net: {0}")]
    Invalid(ValidationReport),

    #[error("{0}")]
    Malformed(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{variable}` has no value `{value}`")]
    UnknownValue { variable: String, value: String },

    #[error("outcome has {got} values but the net has {expected} variables")]
    OutcomeArity { expected: usize, got: usize },

    #[error("{what} has {count} elements, exceeding the limit of {limit}")]
    SizeLimit { what: &'static str, count: u128, limit: u128 },

    #[error("`{parent}` is not a parent of `{child}`")]
    NotAParent { child: String, parent: String },

    #[error("parent `{parent}` is not redundant for `{child}`")]
    NotRedundant { child: String, parent: String },

    #[error("cannot remove `{value}`: it is the last value of `{variable}`")]
    LastValue { variable: String, value: String },

    #[error("the dependency graph is cyclic")]
    Cyclic,

    #[error("malformed game: {0}")]
    InvalidGame(String),

    #[error("tied payoffs for player `{player}` at opponent profile ({profile})")]
    PayoffTie { player: String, profile: String },
}

impl Error {
    pub fn is_size_limit(&self) -> bool {
        matches!(self, Error::SizeLimit { .. })
    }
}
