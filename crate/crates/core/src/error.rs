use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("n = {n} exceeds the enumeration limit of {limit}")]
    ResourceLimit { n: usize, limit: usize },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    /// A closed form produced a non-integral value; the formula was mis-transcribed.
    #[error("formula {class} is not integral at n = {n}: {value}")]
    NonIntegral { class: String, n: usize, value: String },
}

pub type Result<T> = std::result::Result<T, Error>;
